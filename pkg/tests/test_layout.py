import importlib
import pathlib
import pkgutil

import pytest

import spencer_super

PACKAGE_DIR = pathlib.Path(spencer_super.__file__).parent
TESTS_DIR = pathlib.Path(__file__).parent
MAX_COLUMNS = 88

MODULES = [info.name for info in pkgutil.iter_modules([str(PACKAGE_DIR)])]
SOURCES = sorted(PACKAGE_DIR.glob("*.py")) + sorted(TESTS_DIR.glob("*.py"))


@pytest.mark.parametrize("name", MODULES)
def test_module_has_docstring(name):
    module = importlib.import_module(f"spencer_super.{name}")
    assert module.__doc__ and module.__doc__.strip()


@pytest.mark.parametrize("path", SOURCES, ids=lambda p: p.name)
def test_lines_fit_the_column_limit(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    long_lines = [i + 1 for i, line in enumerate(lines) if len(line) > MAX_COLUMNS]
    assert long_lines == []
