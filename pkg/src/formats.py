"""
Text formats: quivers (.qcat), zero-dimensional configurations (.zconf),
flow data (.flow) and twisted complexes (.tw).

Every format is line based; '#' starts a comment. Parsers report the line
and column of the first offending token.
"""
from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

from ainfty import ID, Arrow, DirectedCategory, QuiverPresentation, from_quiver
from gf2core import Grading
from morse import CriticalPoint, FlowData, TrajectoryComponent, check_flow, morse_category
from twcx import TwistedComplex
from utils import ParseError, fixture_path
from zerodim import GradedZeroSphere, ZeroConfig, fukaya

logger = logging.getLogger(__name__)

Parsed = Union[QuiverPresentation, ZeroConfig, FlowData, TwistedComplex]

SUFFIXES = ('.qcat', '.zconf', '.flow', '.tw')

NAME = r"[A-Za-z0-9_.'-]+"
ARROW_RE = re.compile(rf"arrow\s+({NAME})\s*:\s*({NAME})\s*->\s*({NAME})(?:\s+degree\s+(-?\d+))?\s*$")
SPHERE_RE = re.compile(r"sphere\s*\{\s*(\d+)\s*,\s*(\d+)\s*\}(?:\s+grading\s+(-?\d+)\s+(-?\d+))?\s*$")
TRAJ_RE = re.compile(rf"(traj|comp)\s+({NAME})\s*:\s*({NAME})\s*->\s*({NAME})(.*)$")
PAIR_RE = re.compile(rf"\(\s*({NAME})\s*,\s*({NAME})\s*\)")
DELTA_RE = re.compile(r"delta\s+(\d+)\s*->\s*(\d+)\s*:\s*(.+)$")


def _lines(text: str) -> Iterator[Tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].rstrip()
        if line.strip():
            yield number, line


def _column(line: str, token: str) -> int:
    at = line.find(token)
    return at + 1 if at >= 0 else 1


def _fail(message: str, number: int, line: str, token: Optional[str] = None, source=None):
    column = _column(line, token) if token else len(line) - len(line.lstrip()) + 1
    raise ParseError(message, number, column, source)


def _keyword(line: str) -> str:
    return line.split()[0]


def _grading(value: str, number: int, line: str, source) -> Grading:
    try:
        return Grading.parse(value)
    except ValueError:
        _fail(f"unknown grading group '{value}'", number, line, value, source)


def _empty(source) -> ParseError:
    return ParseError("no declarations", source=source)


# ---------------------------------------------------------------------------
# quivers


def parse_qcat(text: str, source=None) -> QuiverPresentation:
    vertices: List[str] = []
    arrows: List[Arrow] = []
    relations: List[Tuple[Tuple[str, ...], ...]] = []
    grading = Grading.Z
    declared = 0
    for number, line in _lines(text):
        declared += 1
        word = _keyword(line)
        rest = line.strip()[len(word):].strip()
        if word == 'vertex':
            if not rest:
                _fail("vertex needs a name", number, line, source=source)
            for name in rest.split():
                if name in vertices:
                    _fail(f"duplicate vertex {name}", number, line, name, source)
                vertices.append(name)
        elif word == 'arrow':
            match = ARROW_RE.match(line.strip())
            if not match:
                _fail("expected 'arrow NAME : SOURCE -> TARGET [degree D]'", number, line, source=source)
            name, s, t, degree = match.groups()
            for end in (s, t):
                if end not in vertices:
                    _fail(f"unknown vertex {end}", number, line, end, source)
            if vertices.index(s) >= vertices.index(t):
                _fail(f"quiver is not directed: {s} -> {t}", number, line, s, source)
            arrows.append(Arrow(name, s, t, int(degree) if degree else 0))
        elif word == 'relation':
            terms = []
            for chunk in re.split(r"[+=]", rest):
                term = chunk.strip()
                if not term or term == '0':
                    continue
                letters = tuple(x.strip() for x in term.split('*'))
                known = {a.name for a in arrows}
                for x in letters:
                    if x not in known:
                        _fail(f"relation mentions unknown arrow {x}", number, line, x, source)
                terms.append(letters)
            if not terms:
                _fail("empty relation", number, line, source=source)
            relations.append(tuple(terms))
        elif word == 'grading':
            grading = _grading(rest, number, line, source)
        else:
            _fail(f"unknown declaration '{word}'", number, line, word, source)
    if not declared:
        raise _empty(source)
    return QuiverPresentation(tuple(vertices), tuple(arrows), tuple(relations), grading)


def print_qcat(q: QuiverPresentation) -> str:
    out = []
    if q.grading is not Grading.Z:
        out.append(f"grading {q.grading.value}")
    out.extend(f"vertex {v}" for v in q.vertices)
    for a in q.arrows:
        out.append(f"arrow {a.name} : {a.source} -> {a.target} degree {a.degree}")
    for rel in q.relations:
        out.append("relation " + " + ".join("*".join(term) for term in rel))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# zero-dimensional configurations


def parse_zconf(text: str, source=None) -> ZeroConfig:
    fibre = None
    spheres: List[GradedZeroSphere] = []
    declared = 0
    for number, line in _lines(text):
        declared += 1
        word = _keyword(line)
        if word == 'fibre':
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                _fail("expected 'fibre N'", number, line, source=source)
            fibre = int(parts[1])
        elif word == 'sphere':
            match = SPHERE_RE.match(line.strip())
            if not match:
                _fail("expected 'sphere {a,b} [grading g h]'", number, line, source=source)
            a, b, ga, gb = match.groups()
            if a == b:
                _fail("a zero-sphere needs two distinct points", number, line, b, source)
            grades = (int(ga), int(gb)) if ga is not None else (0, 0)
            spheres.append(GradedZeroSphere((int(a), int(b)), grades))
        else:
            _fail(f"unknown declaration '{word}'", number, line, word, source)
    if not declared:
        raise _empty(source)
    if fibre is None:
        raise ParseError("missing 'fibre' declaration", source=source)
    return ZeroConfig(fibre, tuple(spheres))


def print_zconf(cfg: ZeroConfig) -> str:
    out = [f"fibre {cfg.fibre}"]
    out.extend(f"sphere {s}" for s in cfg.spheres)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# flow data


def _component(match, number: int, line: str, source) -> TrajectoryComponent:
    kind, label, s, t, rest = match.groups()
    if kind == 'traj':
        if rest.strip():
            _fail("a trajectory takes no options", number, line, rest.strip(), source)
        return TrajectoryComponent(label, s, t)
    homology: Tuple[int, ...] = (1,)
    compact = False
    boundary: Tuple[Tuple[str, str], ...] = ()
    words = rest.split()
    j = 0
    while j < len(words):
        word = words[j]
        if word == 'homology':
            values = []
            j += 1
            while j < len(words) and re.fullmatch(r"\d+", words[j]):
                values.append(int(words[j]))
                j += 1
            if not values:
                _fail("homology needs Betti numbers", number, line, word, source)
            homology = tuple(values)
            continue
        if word == 'compact':
            compact = True
        elif word == 'boundary':
            tail = " ".join(words[j + 1:])
            pairs = PAIR_RE.findall(tail)
            if not pairs or PAIR_RE.sub("", tail).replace(",", "").strip():
                _fail("expected 'boundary (outer,inner),...'", number, line, word, source)
            boundary = tuple(pairs)
            break
        else:
            _fail(f"unknown component option '{word}'", number, line, word, source)
        j += 1
    return TrajectoryComponent(label, s, t, homology, compact, boundary)


def parse_flow(text: str, source=None, check: bool = True) -> FlowData:
    dimension = 1
    closed = True
    points: List[CriticalPoint] = []
    components: List[TrajectoryComponent] = []
    declared = 0
    for number, line in _lines(text):
        declared += 1
        word = _keyword(line)
        parts = line.split()
        if word == 'dim':
            if len(parts) != 2 or not parts[1].isdigit():
                _fail("expected 'dim N'", number, line, source=source)
            dimension = int(parts[1])
        elif word == 'closed':
            if len(parts) != 2 or parts[1] not in ('yes', 'no'):
                _fail("expected 'closed yes' or 'closed no'", number, line, source=source)
            closed = parts[1] == 'yes'
        elif word == 'crit':
            if len(parts) != 4 or parts[2] != 'index' or not re.fullmatch(r"-?\d+", parts[3]):
                _fail("expected 'crit NAME index K'", number, line, source=source)
            points.append(CriticalPoint(parts[1], int(parts[3])))
        elif word in ('traj', 'comp'):
            match = TRAJ_RE.match(line.strip())
            if not match:
                _fail(f"expected '{word} LABEL : SOURCE -> TARGET ...'", number, line, source=source)
            components.append(_component(match, number, line, source))
        else:
            _fail(f"unknown declaration '{word}'", number, line, word, source)
    if not declared:
        raise _empty(source)
    flow = FlowData(dimension, tuple(points), tuple(components), closed)
    if check:
        check_flow(flow)
    return flow


def print_flow(f: FlowData) -> str:
    out = [f"dim {f.dimension}", f"closed {'yes' if f.closed else 'no'}"]
    out.extend(f"crit {x.name} index {x.index}" for x in f.critical_points)
    for c in f.components:
        if c.compact and c.homology == (1,) and not c.boundary and f.space_dimension(c.source, c.target) == 0:
            out.append(f"traj {c.label} : {c.source} -> {c.target}")
            continue
        text = f"comp {c.label} : {c.source} -> {c.target} homology {' '.join(str(h) for h in c.homology)}"
        if c.compact:
            text += " compact"
        if c.boundary:
            text += " boundary " + ",".join(f"({a},{b})" for a, b in c.boundary)
        out.append(text)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# twisted complexes


def parse_tw(text: str, category: Optional[DirectedCategory] = None, source=None,
             base_dir: Optional[Path] = None, grading_override: Optional[Grading] = None) -> TwistedComplex:
    summands: List[Tuple[int, int]] = []
    pending: List[Tuple[int, str, Tuple[int, int], List[str]]] = []
    grading = None
    declared = 0
    for number, line in _lines(text):
        declared += 1
        word = _keyword(line)
        parts = line.split()
        if word == 'over':
            if category is not None:
                continue
            if len(parts) != 2:
                _fail("expected 'over FILE'", number, line, source=source)
            category = load_category(_resolve(parts[1], base_dir))
        elif word == 'grading':
            grading = _grading(parts[1] if len(parts) > 1 else '', number, line, source)
        elif word == 'summand':
            if category is None:
                _fail("summand before the category is known ('over FILE')", number, line, source=source)
            if len(parts) not in (2, 4) or (len(parts) == 4 and parts[2] != 'shift'):
                _fail("expected 'summand OBJECT [shift S]'", number, line, source=source)
            if parts[1] not in category.names:
                _fail(f"unknown object {parts[1]}", number, line, parts[1], source)
            try:
                sigma = int(parts[3]) if len(parts) == 4 else 0
            except ValueError:
                _fail(f"bad shift '{parts[3]}'", number, line, parts[3], source)
            summands.append((category.names.index(parts[1]), sigma))
        elif word == 'delta':
            match = DELTA_RE.match(line.strip())
            if not match:
                _fail("expected 'delta P -> Q : LABEL + LABEL'", number, line, source=source)
            p, q, labels = match.groups()
            pending.append((number, line, (int(p), int(q)), [x.strip() for x in labels.split('+')]))
        else:
            _fail(f"unknown declaration '{word}'", number, line, word, source)
    if not declared:
        raise _empty(source)
    if category is None:
        raise ParseError("no category: add an 'over FILE' line", source=source)
    grading = grading_override or grading
    if grading is not None and grading is not category.grading:
        category = category.with_grading(grading)

    delta: Dict[Tuple[int, int], frozenset] = {}
    for number, line, (p, q), labels in pending:
        if not (0 <= p < len(summands) and 0 <= q < len(summands)):
            _fail(f"summand index out of range in {p} -> {q}", number, line, source=source)
        op, oq = summands[p][0], summands[q][0]
        entry = set(delta.get((p, q), frozenset()))
        for label in labels:
            if label == 'id' and op == oq:
                entry ^= {ID}
                continue
            space = category.hom(op, oq)
            if label not in space.labels:
                _fail(f"no morphism {label} from {category.names[op]} to {category.names[oq]}",
                      number, line, label, source)
            entry ^= {space.index(label)}
        delta[(p, q)] = frozenset(entry)
    return TwistedComplex(category, tuple(summands), delta)


def print_tw(t: TwistedComplex, over: Optional[str] = None) -> str:
    cat = t.category
    out = []
    if over:
        out.append(f"over {over}")
    if cat.grading is not Grading.Z:
        out.append(f"grading {cat.grading.value}")
    for o, s in t.summands:
        out.append(f"summand {cat.names[o]} shift {s}")
    for (p, q), entry in sorted(t.delta.items()):
        labels = " + ".join(cat.label(t.obj(p), t.obj(q), b) for b in sorted(entry))
        out.append(f"delta {p} -> {q} : {labels}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# files


def _resolve(name: str, base_dir: Optional[Path]) -> Path:
    if base_dir is not None and (Path(base_dir) / name).exists():
        return Path(base_dir) / name
    return fixture_path(name)


def parse_file(path, category: Optional[DirectedCategory] = None, grading: Optional[Grading] = None) -> Parsed:
    path = Path(path)
    text = path.read_text()
    suffix = path.suffix
    logger.debug("parsing %s", path)
    if suffix == '.qcat':
        return parse_qcat(text, path.name)
    if suffix == '.zconf':
        return parse_zconf(text, path.name)
    if suffix == '.flow':
        return parse_flow(text, path.name)
    if suffix == '.tw':
        return parse_tw(text, category, path.name, path.parent, grading)
    raise ParseError(f"unknown file type '{suffix}' (expected one of {', '.join(SUFFIXES)})", source=path.name)


def load_category(path, grading: Optional[Grading] = None) -> DirectedCategory:
    """The directed category described by a .qcat, .zconf or .flow file."""
    value = parse_file(path)
    if isinstance(value, QuiverPresentation):
        c = from_quiver(value)
    elif isinstance(value, ZeroConfig):
        c = fukaya(value, grading or Grading.Z)
    elif isinstance(value, FlowData):
        c = morse_category(value)
    else:
        raise ParseError("a twisted complex does not describe a category", source=Path(path).name)
    if grading is not None and grading is not c.grading:
        c = c.with_grading(grading)
    return c
