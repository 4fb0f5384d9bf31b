import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from gf2core import euler_characteristic
from utils import content_hash, format_table

#canonical report layout
REPORT_VERSION = 1
JSON_INDENT = 2


@dataclass
class RunReport:
    """
    Outcome of one command: input files with their hashes, result tables,
    named verdicts and the wall time. Serialization sorts keys and leaves the
    wall time out unless asked, so identical runs give identical bytes.
    """

    command: str
    inputs: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    lines: list = field(default_factory=list)
    wall_time: float = 0.0
    started: float = field(default_factory=time.perf_counter, repr=False)

    def add_input(self, path):
        path = Path(path)
        self.inputs.append({'path': str(path), 'sha256': content_hash(path)})

    def add_table(self, name, table):
        self.tables[name] = {str(k): v for k, v in table.items()}
        self.lines.append(f"{name}: {format_table(table)}")

    def add_verdict(self, name, value, text=None):
        self.verdicts[name] = bool(value)
        self.lines.append(text if text is not None else f"{name}: {'yes' if value else 'no'}")

    def say(self, line):
        self.lines.append(line)

    def finish(self):
        self.wall_time = time.perf_counter() - self.started
        return self

    @property
    def ok(self):
        return all(self.verdicts.values())

    def to_dict(self, timing=False):
        data = {
            'version': REPORT_VERSION,
            'command': self.command,
            'inputs': self.inputs,
            'tables': self.tables,
            'verdicts': self.verdicts,
            'lines': self.lines,
        }
        if timing:
            data['wall_time'] = f"{self.wall_time:.3f}"
        return data

    def to_json(self, timing=False):
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=JSON_INDENT) + "\n"

    def to_text(self):
        return "\n".join(self.lines) + ("\n" if self.lines else "")


def hom_frame(c):
    """One row per (source, target, degree) with the cohomological Hom dimension."""
    rows = []
    for (i, k), dims in c.hom_table().items():
        for degree, dim in dims.items():
            rows.append({'source': c.names[i], 'target': c.names[k], 'degree': degree, 'dim': dim})
    return pd.DataFrame(rows, columns=['source', 'target', 'degree', 'dim'])


def hom_matrix(c):
    """Total Hom dimension between every ordered pair of objects, identities on the diagonal."""
    data = np.zeros((c.m, c.m), dtype=int)
    np.fill_diagonal(data, 1)
    for (i, k), dims in c.hom_table().items():
        data[i, k] = sum(dims.values())
    return pd.DataFrame(data, index=list(c.names), columns=list(c.names))


def euler_form(c):
    """Euler characteristics of the Hom spaces; a derived invariant of the category."""
    data = np.zeros((c.m, c.m), dtype=int)
    np.fill_diagonal(data, 1)
    for (i, k), dims in c.hom_table().items():
        data[i, k] = euler_characteristic(dims)
    return pd.DataFrame(data, index=list(c.names), columns=list(c.names))


def degree_frame(table, value='dim'):
    if not table:
        return pd.DataFrame(columns=['degree', value])
    return pd.DataFrame(sorted(table.items()), columns=['degree', value])


def e1_frame(table):
    """Length by degree pivot of a length-filtration table."""
    if not table:
        return pd.DataFrame()
    rows = [{'length': d, 'degree': k, 'dim': v} for (d, k), v in table.items()]
    frame = pd.DataFrame(rows)
    return frame.pivot_table(index='length', columns='degree', values='dim', aggfunc='sum', fill_value=0)


def config_frame(cfg):
    rows = []
    for n, s in enumerate(cfg.spheres, start=1):
        rows.append({'sphere': f"L{n}", 'points': f"{{{s.points[0]},{s.points[1]}}}",
                     'grading': f"{s.grading[0]} {s.grading[1]}"})
    return pd.DataFrame(rows, columns=['sphere', 'points', 'grading'])


def morse_degree_frame(table):
    """Pivot of (source, target) pairs against hom degrees, as returned by morse.degree_table."""
    rows = [{'pair': f"{s}->{t}", 'degree': d, 'dim': v} for (s, t), dims in table.items() for d, v in dims.items()]
    if not rows:
        return pd.DataFrame()
    frame = pd.DataFrame(rows)
    return frame.pivot_table(index='pair', columns='degree', values='dim', aggfunc='sum', fill_value=0)
