"""
Parser for blockmodel kernel files
"""
import json
import logging
from pathlib import Path
from typing import Union

from ..models.kernel import Kernel
from ..utils.errors import InputError

logger = logging.getLogger(__name__)


class KernelParser:
    """
    Parser for kernel JSON files of the form {"k": 3, "B": [...], "pi": [...]}

    B may be given row-major as a flat list of k*k numbers or as a nested
    matrix; pi defaults to equal proportions.
    """

    def parse(self, file_path: Union[str, Path]) -> Kernel:
        path = Path(file_path)
        if not path.exists():
            raise FileNotFoundError(f"Kernel file not found: {path}")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise InputError(f"invalid kernel JSON in {path}: {e.msg}", line=e.lineno) from e
        return self.parse_dict(data)

    def parse_dict(self, data) -> Kernel:
        if not isinstance(data, dict):
            raise InputError(f"kernel record must be an object, got {type(data).__name__}")
        kernel = Kernel.from_dict(data)
        logger.debug("parsed %r", kernel)
        return kernel


def load_kernel(file_path: Union[str, Path]) -> Kernel:
    """Convenience function to parse a kernel file"""
    return KernelParser().parse(file_path)


def write_kernel(kernel: Kernel, file_path: Union[str, Path]):
    Path(file_path).write_text(json.dumps(kernel.to_dict(), indent=2))
