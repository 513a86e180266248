"""Line-oriented text files for theories, models and proofs.

Theory file::

    logic laepc
    scale godel 0 1/2 1
    sort power: b
    sort price: g
    unsorted: a
    a =>{1/2} dge b
    query a =>{1/2} (dge b & dge g)

``vars: p q`` declares the single sort of lae/laec; without any declaration
the variables are collected from the formulas in order of appearance.

Model file (declarations as above, then)::

    worlds w1 w2 w3
    sim w1 w2 1/2
    order w1 < w2 < w3
    eval p: w1 w3

Products use one ``component <sort> { ... }`` block per sort holding
``worlds``, ``sim`` and ``order`` lines; sorted variables list component
worlds and unsorted variables list tuples such as ``(x1,y2)``.

Proof file: ``n. <formula> ; axiom A9 | hyp 2 | mp 3 5``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import ApproxEntError, ParseError, SortError
from .grades import GradeScale, format_grade, godel, scale_from_tokens
from .semantics import Evaluation
from .spaces import ChainSpace, ProductSpace, SimilaritySpace, bits
from .syntax import Logic, Outer, Signature, parse_formula, to_text, variables
from .proofs import AxiomStep, HypStep, MPStep, ProofLine

__all__ = [
    "TheoryFile", "ModelFile", "load_theory", "parse_theory", "load_model", "parse_model",
    "format_model", "format_theory", "load_proof", "parse_proof", "format_proof",
]

def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _after_keyword(line: str) -> str:
    head, colon, rest = line.partition(":")
    return rest if colon else head.partition(" ")[2]


def _names(text: str) -> list[str]:
    return text.replace(",", " ").split()


class _Decls:
    """Shared header handling: logic, scale, sort, vars and unsorted lines."""

    def __init__(self):
        self.variant: Logic | None = None
        self.scale: GradeScale | None = None
        self.sorts: list[tuple[str, tuple[str, ...]]] = []
        self.unsorted: list[str] = []

    def take(self, line: str, lineno: int) -> bool:
        word, _, rest = line.partition(" ")
        word = word.rstrip(":")
        if word == "logic":
            self.variant = Logic.of(rest.strip())
        elif word == "scale":
            self.scale = scale_from_tokens(rest.split())
        elif word == "sort":
            name, colon, names = rest.partition(":")
            if not colon:
                raise ParseError("sort line needs 'sort <name>: <variables>'", lineno)
            self.sorts.append((name.strip(), tuple(_names(names))))
        elif word == "vars":
            self.sorts.append(("", tuple(_names(_after_keyword(line)))))
        elif word == "unsorted":
            self.unsorted.extend(_names(_after_keyword(line)))
        else:
            return False
        return True

    def signature(self, found: Sequence[str] = ()) -> Signature | None:
        if self.sorts or self.unsorted:
            return Signature(tuple(self.sorts), tuple(self.unsorted))
        if found:
            return Signature.plain(found)
        return None


# ---------------------------------------------------------------- theories


@dataclass
class TheoryFile:
    variant: Logic
    scale: GradeScale
    sig: Signature
    formulas: tuple[Outer, ...]
    query: Outer | None = None


def parse_theory(text: str, variant=None, scale: GradeScale | None = None) -> TheoryFile:
    decls = _Decls()
    bodies: list[tuple[int, str, bool]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        if line.split()[0] == "query":
            bodies.append((lineno, line[len("query"):].strip(), True))
        elif not decls.take(line, lineno):
            bodies.append((lineno, line, False))
    variant = Logic.of(variant) if variant is not None else (decls.variant or Logic.LAE)
    scale = scale or decls.scale or godel()
    parsed = []
    for lineno, body, is_query in bodies:
        parsed.append((parse_formula(body, None, scale, None, line=lineno), is_query, lineno))
    order: list[str] = []
    for f, _, _ in parsed:
        for v in _appearance(f):
            if v not in order:
                order.append(v)
    sig = decls.signature(order) or Signature(())
    formulas, query = [], None
    for f, is_query, lineno in parsed:
        try:
            parse_formula(to_text(f), sig, scale, variant, line=lineno)
        except SortError as exc:
            raise SortError(f"line {lineno}: {exc}") from None
        if is_query:
            if query is not None:
                raise ParseError("more than one query", lineno)
            query = f
        else:
            formulas.append(f)
    sig.check_for(variant)
    return TheoryFile(variant, scale, sig, tuple(formulas), query)


def _appearance(f) -> list[str]:
    names = variables(f)
    return [t for t in re.findall(r"[A-Za-z_][A-Za-z0-9_']*", to_text(f)) if t in names]


def load_theory(path, variant=None, scale=None) -> TheoryFile:
    return parse_theory(Path(path).read_text(), variant, scale)


def _sig_lines(sig: Signature) -> list[str]:
    out = []
    for name, names in sig.sorts:
        out.append(f"sort {name}: {' '.join(names)}" if name else f"vars: {' '.join(names)}")
    if sig.unsorted:
        out.append(f"unsorted: {' '.join(sig.unsorted)}")
    return out


def format_theory(th: TheoryFile) -> str:
    lines = [f"logic {th.variant.value}", f"scale {th.scale.to_text()}", *_sig_lines(th.sig)]
    lines += [to_text(f) for f in th.formulas]
    if th.query is not None:
        lines.append(f"query {to_text(th.query)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- models


@dataclass
class ModelFile:
    variant: Logic
    scale: GradeScale
    sig: Signature
    evaluation: Evaluation

    @property
    def space(self) -> SimilaritySpace:
        return self.evaluation.space


class _SpaceSpec:
    def __init__(self):
        self.worlds: list[str] = []
        self.sims: dict[tuple[str, str], Fraction] = {}
        self.order: list[str] | None = None

    def take(self, line: str, lineno: int) -> bool:
        word, _, rest = line.partition(" ")
        if word == "worlds":
            self.worlds.extend(_names(rest))
        elif word == "sim":
            parts = rest.split()
            if len(parts) != 3:
                raise ParseError("sim line needs 'sim <world> <world> <grade>'", lineno)
            self.sims[(parts[0], parts[1])] = Fraction(parts[2])
        elif word == "order":
            self.order = [w.strip() for w in rest.split("<")]
        else:
            return False
        return True

    def build(self, scale: GradeScale, ordered: bool, where: str):
        known = set(self.worlds)
        for (u, v) in self.sims:
            for w in (u, v):
                if w not in known:
                    raise ApproxEntError(f"{where}: sim mentions unknown world {w!r}")
        if not ordered:
            return SimilaritySpace.from_grades(scale, self.worlds, self.sims)
        order = self.order or list(self.worlds)
        if sorted(order) != sorted(self.worlds):
            raise ApproxEntError(f"{where}: order must list every world exactly once")
        pos = {w: i for i, w in enumerate(self.worlds)}
        space = SimilaritySpace.from_grades(scale, self.worlds, self.sims, check=False)
        return ChainSpace(scale, self.worlds, space.sim, [pos[w] for w in order])


def parse_model(text: str, variant=None, scale: GradeScale | None = None, check: bool = True) -> ModelFile:
    decls = _Decls()
    top = _SpaceSpec()
    comps: list[tuple[str, _SpaceSpec]] = []
    evals: list[tuple[int, str, str]] = []
    current: _SpaceSpec | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        if current is not None:
            if line == "}":
                current = None
                continue
            closing = line.endswith("}")
            body = line[:-1].strip() if closing else line
            if body and not current.take(body, lineno):
                raise ParseError(f"unexpected line inside component: {body!r}", lineno)
            if closing:
                current = None
            continue
        if line.startswith("component"):
            m = re.fullmatch(r"component\s+(\S+)\s*\{\s*(.*)", line)
            if not m:
                raise ParseError("component line needs 'component <sort> {'", lineno)
            current = _SpaceSpec()
            comps.append((m.group(1), current))
            rest = m.group(2).strip()
            if rest:
                closing = rest.endswith("}")
                body = rest[:-1].strip() if closing else rest
                if body:
                    current.take(body, lineno)
                if closing:
                    current = None
            continue
        if line.startswith("eval"):
            name, colon, worlds = line[len("eval"):].partition(":")
            if not colon:
                raise ParseError("eval line needs 'eval <variable>: <worlds>'", lineno)
            evals.append((lineno, name.strip(), worlds))
            continue
        if decls.take(line, lineno) or top.take(line, lineno):
            continue
        raise ParseError(f"unexpected line {line!r}", lineno)
    if current is not None:
        raise ParseError("unterminated component block", len(text.splitlines()))

    scale = scale or decls.scale or godel()
    if variant is None:
        variant = decls.variant or (Logic.LAEPC if comps else Logic.LAEC if top.order else Logic.LAE)
    variant = Logic.of(variant)
    sig = decls.signature([name for _, name, _ in evals])
    if sig is None:
        sig = Signature(())

    if variant is Logic.LAEPC:
        if not comps:
            raise ApproxEntError("laepc models need component blocks")
        by_name = dict(comps)
        chains = []
        for name, _ in sig.sorts:
            if name not in by_name:
                raise ApproxEntError(f"no component for sort {name!r}")
            chains.append(by_name[name].build(scale, True, f"component {name}"))
        space = ProductSpace(chains, sig.sort_names)
    else:
        space = top.build(scale, variant is Logic.LAEC, "model")

    assignment = {}
    for lineno, name, worlds in evals:
        if name not in sig:
            raise SortError(f"line {lineno}: undeclared variable {name!r}")
        assignment[name] = _world_mask(space, sig, name, worlds, lineno)
    ev = Evaluation(space, sig, assignment, variant, check=check)
    return ModelFile(variant, scale, sig, ev)


def _world_mask(space, sig: Signature, name: str, text: str, lineno: int) -> int:
    if isinstance(space, ProductSpace):
        i = sig.sort_of(name)
        if i is not None:
            comp = space.components[i]
            mask = 0
            for w in _names(text):
                if w not in comp.worlds:
                    raise ParseError(f"unknown world {w!r} of sort {sig.sorts[i][0]}", lineno)
                mask |= 1 << comp.worlds.index(w)
            return space.cyl(i, mask)
        mask = 0
        for t in re.findall(r"\(([^)]*)\)", text):
            coords = [c.strip() for c in t.split(",")]
            if len(coords) != len(space.components):
                raise ParseError(f"tuple ({t}) has the wrong length", lineno)
            try:
                idx = [c.worlds.index(x) for c, x in zip(space.components, coords)]
            except ValueError:
                raise ParseError(f"unknown world in tuple ({t})", lineno) from None
            mask |= 1 << space.index_of(idx)
        return mask
    mask = 0
    for w in _names(text):
        if w not in space.worlds:
            raise ParseError(f"unknown world {w!r}", lineno)
        mask |= 1 << space.worlds.index(w)
    return mask


def load_model(path, variant=None, scale=None, check: bool = True) -> ModelFile:
    return parse_model(Path(path).read_text(), variant, scale, check)


def _space_lines(space: SimilaritySpace, indent: str = "") -> list[str]:
    lines = [f"{indent}worlds {' '.join(space.worlds)}"]
    for u in range(space.n):
        for v in range(u + 1, space.n):
            g = space.sim_index(u, v)
            if g:
                lines.append(f"{indent}sim {space.worlds[u]} {space.worlds[v]} {format_grade(space.scale.levels[g])}")
    if isinstance(space, ChainSpace):
        lines.append(f"{indent}order {' < '.join(space.worlds[w] for w in space.order)}")
    return lines


def format_model(ev: Evaluation) -> str:
    """Model file text that :func:`parse_model` reads back to the same model."""
    space, sig = ev.space, ev.sig
    lines = [f"logic {ev.variant.value}", f"scale {space.scale.to_text()}", *_sig_lines(sig)]
    if isinstance(space, ProductSpace):
        for name, comp in zip(sig.sort_names, space.components):
            lines.append(f"component {name} {{")
            lines += _space_lines(comp, "  ")
            lines.append("}")
        for i, (_, names) in enumerate(sig.sorts):
            comp = space.components[i]
            for v in names:
                proj = space.project(i, ev.assignment[v])
                lines.append(f"eval {v}: {' '.join(comp.worlds[x] for x in bits(proj))}".rstrip())
        for a in sig.unsorted:
            lines.append(f"eval {a}: {' '.join(space.worlds[w] for w in bits(ev.assignment[a]))}".rstrip())
    else:
        lines += _space_lines(space)
        for v in sig.variables:
            lines.append(f"eval {v}: {' '.join(space.worlds[w] for w in bits(ev.assignment[v]))}".rstrip())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- proofs

_PROOF_LINE = re.compile(r"\s*(\d+)\s*\.\s*(.*?)\s*;\s*(.*?)\s*$")


def parse_proof(text: str, scale: GradeScale | None = None) -> list[ProofLine]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        m = _PROOF_LINE.fullmatch(line)
        if not m:
            raise ParseError("proof lines look like 'n. <formula> ; axiom A9 | hyp k | mp i j'", lineno)
        number, body, just = int(m.group(1)), m.group(2), m.group(3).split()
        formula = parse_formula(body, None, scale, None, line=lineno)
        if not just:
            raise ParseError("missing justification", lineno)
        kind = just[0].lower()
        try:
            if kind == "axiom" and len(just) >= 2:
                step = AxiomStep(just[1], " ".join(just[2:]))
            elif kind == "hyp" and len(just) == 2:
                step = HypStep(int(just[1]))
            elif kind == "mp" and len(just) == 3:
                step = MPStep(int(just[1]), int(just[2]))
            else:
                raise ValueError
        except ValueError:
            raise ParseError(f"bad justification {' '.join(just)!r}", lineno) from None
        out.append(ProofLine(number, formula, step))
    return out


def load_proof(path, scale=None) -> list[ProofLine]:
    return parse_proof(Path(path).read_text(), scale)


def format_proof(lines: Sequence[ProofLine]) -> str:
    return "".join(f"{ln.number}. {to_text(ln.formula)} ; {ln.step}\n" for ln in lines)
