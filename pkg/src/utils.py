import os
import hashlib
from pathlib import Path

#defaults
DEFAULT_SEED = 20240
FIXTURE_ENV = 'WORKBENCH_FIXTURES'
FIXTURE_DIR = Path(__file__).resolve().parent.parent / 'fixtures'


class WorkbenchError(Exception):
    """Base class for every error the engine raises on purpose."""


class ParseError(WorkbenchError):

    def __init__(self, message, line=None, column=None, source=None):
        self.line = line
        self.column = column
        self.source = source
        where = ''
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
            if column is not None:
                where += f"{column}:"
        super().__init__(f"{where} {message}" if where else message)


class InvariantError(WorkbenchError):
    """A type invariant or an operation precondition does not hold."""


class ObstructionError(WorkbenchError):
    """A linear system expected to be solvable (transfer, functor extension) is not."""


class BoundExceeded(WorkbenchError):
    pass


def fixture_path(name):
    """
    Resolve a fixture by bare name. Paths that exist as given win,
    otherwise the fixture directory (overridable by environment) is searched.
    """
    path = Path(name)
    if path.exists():
        return path
    base = Path(os.environ.get(FIXTURE_ENV, FIXTURE_DIR))
    candidate = base / name
    if candidate.exists():
        return candidate
    raise FileNotFoundError(f"Fixture not found: {name} (searched {base})")


def content_hash(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def format_table(table):
    #degree-keyed table -> "0:1 1:2"
    if not table:
        return "0"
    return " ".join(f"{k}:{v}" for k, v in sorted(table.items()))


def list_fixtures(suffix):
    base = Path(os.environ.get(FIXTURE_ENV, FIXTURE_DIR))
    return sorted(p.name for p in base.glob(f"*{suffix}"))
