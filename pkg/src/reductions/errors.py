#!/usr/bin/env python3
"""
Reduction Errors

Shared by the CNF, SqrtSum and two-counter front-ends.
"""

from src.core import SsmgError


class InstanceError(SsmgError):
    """Raised for malformed instance text or instances violating their invariants."""
    pass
