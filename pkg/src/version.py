"""Version of the ssmg toolkit.

Release builds report the package version; checkouts with a git tag or
commit report that instead so bug reports can name the exact tree.
"""

import subprocess
from pathlib import Path
from typing import Optional

__version__ = "0.3.0"


def _git(*args: str) -> Optional[str]:
    try:
        result = subprocess.run(
            ["git", *args],
            capture_output=True,
            text=True,
            timeout=2,
            cwd=Path(__file__).parent.parent
        )
        if result.returncode == 0:
            return result.stdout.strip() or None
    except (OSError, subprocess.SubprocessError):
        pass
    return None


def get_current_version() -> str:
    """Exact git tag, else "<version>+g<short sha>", else the package version."""
    tag = _git("describe", "--tags", "--exact-match")
    if tag:
        return tag
    commit = _git("rev-parse", "--short", "HEAD")
    if commit:
        return f"{__version__}+g{commit}"
    return __version__
