from typing import Any, Dict, List

from kernel.family_parser import FamilySpec


class Command:
    """
    Base class of the kernel's commands. `run` returns the report sections
    and logs human-readable lines through the kernel.
    """
    name = ""
    families = 1  # number of family files the command takes

    def __init__(self, kernel):
        self.kernel = kernel

    @property
    def flags(self):
        return self.kernel.flags

    def run(self, specs: List[FamilySpec]) -> Dict[str, Any]:
        """Override this."""
        raise NotImplementedError

    def log(self, message: str):
        """Helper to log to the kernel."""
        self.kernel.log(message)
