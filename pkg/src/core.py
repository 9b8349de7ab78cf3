#!/usr/bin/env python3
"""
Core Module

Shared plumbing for every package:
- Timestamped file logging
- Root exception type
- Rational parsing and formatting helpers used by the file formats
"""

import re
from datetime import datetime
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union


_RATIONAL_PATTERN = re.compile(r"^-?\d+(/\d+)?$")


class SsmgError(Exception):
    """Base class for every error raised by this package."""
    pass


def log_to_file(log_file: Optional[Path], message: str) -> None:
    """Append a timestamped message to the log file

    Args:
        log_file: Path to log file (None disables logging)
        message: Message to log
    """
    if log_file is None:
        return
    timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
    try:
        with open(log_file, 'a', encoding='utf-8') as f:
            f.write(f"[{timestamp}] {message}\n")
    except OSError as e:
        print(f"WARNING: Could not write to log: {e}")


def parse_rational(text: Union[str, int], where: str = "value") -> Fraction:
    """Parse "a/b" or an integer string into a reduced Fraction

    Args:
        text: Rational literal
        where: Field path used in the error message

    Returns:
        Reduced fraction

    Raises:
        ValueError: If the literal is malformed or has a zero denominator
    """
    if isinstance(text, bool):
        raise ValueError(f"{where}: expected a rational string, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_PATTERN.match(text.strip()):
        raise ValueError(f"{where}: malformed rational {text!r}")
    numerator, _, denominator = text.strip().partition("/")
    if denominator and int(denominator) == 0:
        raise ValueError(f"{where}: zero denominator in {text!r}")
    return Fraction(int(numerator), int(denominator or 1))


def format_rational(value: Fraction) -> str:
    """Format a fraction as "a/b" (or "a" when integral)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
