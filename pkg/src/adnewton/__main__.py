"""Allows `python -m adnewton`."""

from .cli import console_main

console_main()
