"""Batch command-line front end.

One job per invocation: read a JSON document, run one library operation,
print a deterministic report.  Exit codes: 0 success (report on stdout),
1 typed domain rejection (the mathematics said no; the error type and
reason are reported), 2 malformed input (schema, shape, or parse errors).

Caps are never silent: every handler echoes the caps it consulted into
its report.
"""

from __future__ import annotations

import argparse
import json

from .errors import DomainError
from .fincat import (FreeBoundary, FreeMonoidCategory, IntervalClass, Loop,
                     MonoidCategory, least_rotation, monoid_from_json)
from .frobenius import (PIHSystem, Reject, classification_from_json,
                        classification_to_json, classify_genfun,
                        cob2_pseudochar_check, confluent_vandermonde_det,
                        frobenius_from_json, frobenius_to_json,
                        generating_function, genfun_from_json, genfun_to_json,
                        handle_element, pih_check, pih_solve, surface_eval,
                        validate, witness_synthesis)
from .linalg import Matrix, format_poly, rat, rat_str
from .pseudochar import (GraphHolonomy, Infeasible, alpha_charpoly, degree,
                         graph_pseudoholonomy, lift_with_table,
                         pseudochar_from_json)
from .statespaces import (Evaluation, WeightedAutomaton,
                          cob2_spanning, cob2_state_space,
                          evaluation_from_monoid, hankel_minimize,
                          state_space_boolean, state_space_field)


# ---------------------------------------------------------------------------
# shared input helpers


def _object_from(doc: dict, default) -> tuple:
    """Signed object word [[obj, sign], ...]; signs are +1/-1."""
    raw = doc.get("object", default)
    out = []
    for entry in raw:
        obj, sign = entry
        if sign not in (1, -1):
            raise ValueError(f"sign must be 1 or -1, got {sign!r}")
        out.append((obj, sign))
    return tuple(out)


def _rat_list(values) -> list:
    return [rat(v) for v in values]


def _evaluation_from(doc: dict):
    """Category, evaluation, boundary from either input shape.

    {"monoid": ..., "alpha": [...]}: per-element loop values over the
    one-object category.  {"free_monoid": {"letters": ...}, "loops":
    {word: value}, "intervals"?: {word: value}}: tables keyed by words,
    canonicalized here; a boundary is attached iff intervals are given.
    """
    if "monoid" in doc:
        cat = MonoidCategory(monoid_from_json(doc))
        return cat, evaluation_from_monoid(cat, doc["alpha"]), None
    cat = FreeMonoidCategory(tuple(doc["free_monoid"]["letters"]))
    loop_values = {}
    for text, v in doc.get("loops", {}).items():
        key = Loop(0, least_rotation(cat.word(text)))
        v = rat(v)
        if loop_values.setdefault(key, v) != v:
            raise ValueError(f"conflicting values on the loop class of {text!r}")
    interval_values = {}
    for text, v in doc.get("intervals", {}).items():
        key = IntervalClass(0, (), cat.word(text))
        v = rat(v)
        if interval_values.setdefault(key, v) != v:
            raise ValueError(f"conflicting values on the interval {text!r}")
    boundary = FreeBoundary(cat) if "intervals" in doc else None
    return cat, Evaluation(loop_values, interval_values), boundary


# ---------------------------------------------------------------------------
# handlers (one per command; each returns a JSON-ready dict)


def _run_statespace(doc: dict, args) -> dict:
    cat, alpha, boundary = _evaluation_from(doc)
    obj = _object_from(doc, [[0, 1], [0, -1]])
    ss = state_space_field(cat, obj, alpha, boundary, args.cap_words)
    stabilized = False
    if args.cap_words >= 1:
        prev = state_space_field(cat, obj, alpha, boundary, args.cap_words - 1)
        stabilized = prev.dimension == ss.dimension
    out = {
        "command": "statespace",
        "object": [[o, s] for o, s in obj],
        "spanning_size": len(ss.spanning),
        "gram_rows": ss.gram.rows,
        "gram_cols": ss.gram.cols,
        "rank": ss.dimension,
        "stabilized": stabilized,
        "cap_words": args.cap_words,
    }
    if doc.get("emit_gram"):
        out["gram"] = [[rat_str(x) for x in row] for row in ss.gram.entries]
    return out


def _run_boolean_statespace(doc: dict, args) -> dict:
    cat = FreeMonoidCategory(tuple(doc["alphabet"]))
    boundary = FreeBoundary(cat)
    accepted = {cat.word(text) for text in doc["accepted"]}
    table = {IntervalClass(0, (), w): int(w in accepted)
             for w in cat.words_up_to(2 * args.cap_words)}
    alpha = Evaluation(interval_values=table)
    obj = _object_from(doc, [[0, 1]])
    ss = state_space_boolean(cat, obj, alpha, boundary, args.cap_words)
    return {
        "command": "boolean-statespace",
        "alphabet": "".join(cat.alphabet),
        "object": [[o, s] for o, s in obj],
        "spanning_size": len(ss.spanning),
        "n_states": ss.n_states,
        "n_join_irreducible": ss.n_join_irreducible,
        "states": ["".join(str(b) for b in row) for row in ss.states],
        "cap_words": args.cap_words,
    }


def _run_automaton_minimize(doc: dict, args) -> dict:
    body = doc["automaton"]
    initial = _rat_list(body["initial"])
    final = _rat_list(body["final"])
    n = len(initial)
    if len(final) != n:
        raise ValueError("initial and final lengths differ")
    transitions = {}
    for letter, rows in body["transitions"].items():
        m = Matrix(rows)
        if m.rows != n or m.cols != n:
            raise ValueError(f"transition {letter!r} is not {n}x{n}")
        transitions[letter] = m
    a = WeightedAutomaton(initial, transitions, final)
    b = hankel_minimize(a)
    return {
        "command": "automaton-minimize",
        "dimension_before": a.dimension,
        "dimension_after": b.dimension,
        "automaton": {
            "initial": [rat_str(x) for x in b.initial],
            "transitions": {
                letter: [[rat_str(x) for x in row] for row in m.entries]
                for letter, m in b.transitions.items()},
            "final": [rat_str(x) for x in b.final],
        },
    }


def _run_pseudochar_degree(doc: dict, args) -> dict:
    monoid = monoid_from_json(doc)
    alpha = pseudochar_from_json(monoid, doc)
    res = degree(alpha, args.max_degree)
    return {
        "command": "pseudochar-degree",
        "d": res.d,
        "witness": None if res.witness is None else list(res.witness),
        "tuples_checked": res.tuples_checked,
        "max_degree": args.max_degree,
    }


def _run_pseudochar_charpoly(doc: dict, args) -> dict:
    monoid = monoid_from_json(doc)
    alpha = pseudochar_from_json(monoid, doc)
    x, d = int(doc["x"]), int(doc["d"])
    p = alpha_charpoly(alpha, x, d)
    return {
        "command": "pseudochar-charpoly",
        "x": x,
        "d": d,
        "coeffs": [rat_str(c) for c in p.coeffs],
        "display": format_poly(p, "t"),
    }


def _run_pseudochar_lift(doc: dict, args) -> dict:
    monoid = monoid_from_json(doc)
    alpha = pseudochar_from_json(monoid, doc)
    table = [pseudochar_from_json(monoid, {"pseudocharacter": body})
             for body in doc["table"]]
    mults = lift_with_table(alpha, table)
    return {"command": "pseudochar-lift", "multiplicities": list(mults)}


def _run_holonomy(doc: dict, args) -> dict:
    body = doc["graph"]
    gh = GraphHolonomy(body["n_vertices"],
                       [(src, tgt, Matrix(rows))
                        for src, tgt, rows in body["edges"]])
    base = doc.get("base", 0)
    rep = graph_pseudoholonomy(gh, args.cap_words, base)
    return {
        "command": "holonomy",
        "base": base,
        "dimension": rep.dimension,
        "d": rep.degree.d,
        "tuples_checked": rep.degree.tuples_checked,
        "witness": None if rep.degree.witness is None else [
            [[rat_str(x) for x in row] for row in m.entries]
            for m in rep.degree.witness],
        "table": {",".join(str(e) for e in walk): rat_str(tr)
                  for walk, tr in rep.table.items()},
        "max_len": args.cap_words,
    }


def _run_frobenius_validate(doc: dict, args) -> dict:
    fa = frobenius_from_json(doc)
    validate(fa)
    hd = handle_element(fa)
    return {
        "command": "frobenius-validate",
        "ok": True,
        "dim": fa.dim,
        "handle": [rat_str(x) for x in hd.element],
        "genus_one_value": rat_str(surface_eval(fa, 1)),
    }


def _run_genfun(doc: dict, args) -> dict:
    fa = frobenius_from_json(doc)
    validate(fa)
    rf = generating_function(fa)
    return {
        "command": "genfun",
        "dim": fa.dim,
        "genfun": genfun_to_json(rf)["genfun"],
        "display": str(rf),
    }


def _run_classify(doc: dict, args) -> dict:
    rf = genfun_from_json(doc)
    cd = classify_genfun(rf)
    return {
        "command": "classify",
        "classification": classification_to_json(cd)["classification"],
        "display": str(cd.genfun()),
    }


def _run_witness(doc: dict, args) -> dict:
    cd = classification_from_json(doc)
    fa = witness_synthesis(cd)
    return {
        "command": "witness",
        "dim": fa.dim,
        "frobenius": frobenius_to_json(fa)["frobenius"],
    }


def _run_pih_solve(doc: dict, args) -> dict:
    blocks = [(rat(lam), int(n), rat(mult)) for lam, n, mult in doc["blocks"]]
    alpha1 = doc.get("alpha1")
    cs = pih_solve(blocks, None if alpha1 is None else rat(alpha1))
    d, u = confluent_vandermonde_det(blocks)
    return {
        "command": "pih-solve",
        "blocks": [[rat_str(lam), n, rat_str(mult)] for lam, n, mult in cs.blocks],
        "r": [rat_str(x) for x in cs.r],
        "gamma": [rat_str(x) for x in cs.gamma],
        "verdict": cs.verdict,
        "det": rat_str(d),
        "unit": rat_str(u),
    }


def _run_pih_check(doc: dict, args) -> dict:
    body = doc["pih"]
    pih = PIHSystem(tuple(_rat_list(body["p"])), Matrix(body["h"]),
                    tuple(_rat_list(body["iota"])))
    rep = pih_check(pih, _rat_list(doc["alpha"]))
    violation = rep.first_violation
    return {
        "command": "pih-check",
        "dim": rep.dim,
        "ok": rep.ok,
        "first_violation": None if violation is None else {
            "n": violation.n, "which": violation.which},
    }


def _run_cob2_dim(doc: dict, args) -> dict:
    m = int(doc["m"])
    seq = _rat_list(doc["alpha"])
    dim, stabilized = cob2_state_space(m, seq, args.cap_genus)
    return {
        "command": "cob2-dim",
        "m": m,
        "dimension": dim,
        "stabilized": stabilized,
        "spanning_size": len(cob2_spanning(m, args.cap_genus)),
        "cap_genus": args.cap_genus,
    }


def _run_cob2_pseudo(doc: dict, args) -> dict:
    seq = _rat_list(doc["alpha"])
    cap_dots = doc.get("cap_dots")
    rep = cob2_pseudochar_check(seq, int(doc["d"]),
                                None if cap_dots is None else int(cap_dots))
    return {
        "command": "cob2-pseudo",
        "d": rep.d,
        "cap_dots": rep.cap_dots,
        "ok": rep.ok,
        "witness": None if rep.witness is None else [rep.witness[0],
                                                     list(rep.witness[1])],
    }


_COMMANDS = {
    "statespace": _run_statespace,
    "boolean-statespace": _run_boolean_statespace,
    "automaton-minimize": _run_automaton_minimize,
    "pseudochar-degree": _run_pseudochar_degree,
    "pseudochar-charpoly": _run_pseudochar_charpoly,
    "pseudochar-lift": _run_pseudochar_lift,
    "holonomy": _run_holonomy,
    "frobenius-validate": _run_frobenius_validate,
    "genfun": _run_genfun,
    "classify": _run_classify,
    "witness": _run_witness,
    "pih-solve": _run_pih_solve,
    "pih-check": _run_pih_check,
    "cob2-dim": _run_cob2_dim,
    "cob2-pseudo": _run_cob2_pseudo,
}

_HELP = {
    "statespace": "gram rank of the state space at an object",
    "boolean-statespace": "distinct/join-irreducible states over the Boolean semiring",
    "automaton-minimize": "exact weighted-automaton minimization",
    "pseudochar-degree": "least vanishing level of the antisymmetrized traces",
    "pseudochar-charpoly": "degree-d characteristic polynomial at an element",
    "pseudochar-lift": "nonnegative-integer multiplicities against a character table",
    "holonomy": "closed-walk trace table and degree of a matrix-labeled graph",
    "frobenius-validate": "axioms, handle element, genus-one value",
    "genfun": "rational generating function of the surface values",
    "classify": "admissibility of a generating function",
    "witness": "an algebra realizing a classification",
    "pih-solve": "confluent expansion coefficients and dimension verdict",
    "pih-check": "(p, h, iota) realization against a value sequence",
    "cob2-dim": "circle-count state-space dimension with genus cap",
    "cob2-pseudo": "degree-d vanishing for a surface-value sequence",
}


# ---------------------------------------------------------------------------
# report emission: byte-identical for identical inputs


def _render_scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (int, str)):
        return str(v)
    return json.dumps(v, sort_keys=True)


def _emit(doc: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(doc, sort_keys=True))
        return
    for key in sorted(doc):
        print(f"{key}: {_render_scalar(doc[key])}")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True,
                        help="path to the JSON job document")
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="report format (default: text)")
    common.add_argument("--cap-words", type=int, default=4, dest="cap_words",
                        help="label word-length cap; walk-length cap "
                             "for holonomy (default: 4)")
    common.add_argument("--cap-genus", type=int, default=4, dest="cap_genus",
                        help="genus cap for cob2-dim (default: 4)")
    common.add_argument("--max-degree", type=int, default=6,
                        dest="max_degree",
                        help="degree search ceiling (default: 6)")
    parser = argparse.ArgumentParser(
        prog="loopcat",
        description="Exact diagram-calculus reports from JSON job files.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sub.add_parser(name, parents=[common], help=_HELP[name])
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = _COMMANDS[args.command]
    try:
        with open(args.input, encoding="utf-8") as fh:
            doc = json.load(fh)
        result = handler(doc, args)
    except DomainError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, Reject):
            payload["reason"] = exc.reason
        if isinstance(exc, Infeasible) and exc.solution is not None:
            payload["solution"] = [rat_str(s) for s in exc.solution]
        _emit(payload, args.format)
        return 1
    except (OSError, ValueError, TypeError, KeyError, IndexError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args.format)
        return 2
    _emit(result, args.format)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
