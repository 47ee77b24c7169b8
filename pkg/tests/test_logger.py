"""
Unit Tests for Structured Logging
Tests JSON output, context propagation and metric records
"""

import io
import json
import logging
import sys
import unittest
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from cirsum.logging import create_logger


class TestUnifiedLogger(unittest.TestCase):
    """Test the unified logger."""

    def setUp(self):
        """Set up test fixtures."""
        self.stream = io.StringIO()
        self.logger = create_logger(name="cirsum.tests.logging", log_level="INFO", json_format=True,
                                    stream=self.stream)

    def records(self):
        return [json.loads(line) for line in self.stream.getvalue().splitlines() if line.strip()]

    def test_json_output(self):
        """Test messages are written as JSON lines."""
        self.logger.info("grid evaluated")
        record = self.records()[-1]
        self.assertEqual(record['message'], "grid evaluated")
        self.assertEqual(record['level'], "INFO")
        self.assertEqual(record['logger'], "cirsum.tests.logging")
        self.assertIn('timestamp', record)

    def test_level_filter(self):
        """Test messages below the level are dropped."""
        self.logger.debug("hidden")
        self.assertEqual(self.records(), [])

    def test_context(self):
        """Test context values are attached until cleared."""
        self.logger.set_context(command='pdf', seed=7)
        self.logger.warning("clamped")
        self.assertEqual(self.records()[-1]['context'], {'command': 'pdf', 'seed': 7})

        self.logger.clear_context()
        self.logger.warning("plain")
        self.assertNotIn('context', self.records()[-1])

    def test_metric(self):
        """Test metric records carry name, value and tags."""
        self.logger.set_context(command='validate')
        self.logger.metric("pdf_ms", 12.5, tags={'engine': 'kummer'})
        record = self.records()[-1]
        self.assertEqual(record['message'], "METRIC: pdf_ms=12.5")
        self.assertEqual(record['context']['metric'], "pdf_ms")
        self.assertEqual(record['context']['value'], 12.5)
        self.assertEqual(record['context']['tags'], {'engine': 'kummer'})
        self.assertEqual(record['context']['command'], 'validate')

    def test_handlers_not_duplicated(self):
        """Test recreating a logger replaces its handlers."""
        create_logger(name="cirsum.tests.logging", log_level="INFO", stream=self.stream)
        self.assertEqual(len(logging.getLogger("cirsum.tests.logging").handlers), 1)

    def test_text_format(self):
        """Test the colored console format."""
        stream = io.StringIO()
        log = create_logger(name="cirsum.tests.text", log_level="INFO", json_format=False, stream=stream)
        log.info("hello")
        self.assertIn("cirsum.tests.text: hello", stream.getvalue())


if __name__ == '__main__':
    unittest.main()
