"""python -m cirsum"""

from .cli import run

run()
