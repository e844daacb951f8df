"""JSON session documents: validation, object construction and query execution."""

import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import jsonschema

from . import albanese as alb
from .numfield import QQ, Lattice, NumberField
from .numfield.field import FieldError
from .onemotive import (
    AbelianDatum,
    MotiveError,
    OneMotive,
    cartier_dual_motive,
    cartier_identification,
    hom_motives,
    ker_u,
    realize_BdR,
    realize_dRB,
    realize_morphism,
)
from .perimod import (
    PeriodTriple,
    TripleError,
    biext_group,
    cartier_dual_triple,
    check_hodge_preservation,
    check_weight_preservation,
    dual,
    find_isomorphism,
    hom_group,
    period_cohomology,
    tate,
    tate_twist,
    tensor,
)
from .periodring import (
    ABELIAN_PERIOD,
    ELLIPTIC_LOG,
    LOG_PRIME,
    LOG_UNIT,
    ParseError,
    PeriodScalar,
    RegistryError,
    SymbolRegistry,
    parse_scalar,
    rational_exponents,
)

SCHEMA_VERSION = "1.0"
_TATE_RE = re.compile(r"^Z\((-?\d+)\)$")
_LOG_RE = re.compile(r"(?<![A-Za-z0-9_])log(\d+)(?![A-Za-z0-9_'])")
_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")

ARGS = {
    "realize": {"motive": "motive"},
    "hom": {"source": "object", "target": "object"},
    "dual": {"object": "object"},
    "cartier": {"object": "object"},
    "tensor": {"left": "object", "right": "object"},
    "twist": {"object": "object"},
    "hphi": {"object": "object"},
    "keru": {"motive": "motive"},
    "biext": {"left": "object", "right": "object"},
    "albanese": {"curve": "curve"},
    "report": {"curve": "curve"},
    "fullnesscheck": {"source": "motive", "target": "motive"},
}


class SessionError(ValueError):
    """Schema or semantic problem with a session document (exit code 1)."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def load_schema():
    return json.loads(resources.files("periodmotives").joinpath("schema/session.schema.json").read_text())


@dataclass
class Session:
    raw: dict
    registry: SymbolRegistry
    motives: dict
    triples: dict
    curves: dict
    queries: list
    options: dict = field(default_factory=dict)

    def __eq__(self, other):
        return isinstance(other, Session) and self.raw == other.raw

    __hash__ = None


def emit_session(doc):
    """Canonical text for a session (or raw dict)."""
    raw = doc.raw if isinstance(doc, Session) else doc
    return json.dumps(raw, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_session(text):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SessionError([f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"]) from None
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        raise SessionError([f"{'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in errors])
    return build_session(raw)


def _names_unique(raw):
    seen = {}
    errors = []
    for section in ("motives", "triples", "curves"):
        for item in raw.get(section, []):
            n = item["name"]
            if n in seen:
                errors.append(f"duplicate name {n!r} in {section} (already used in {seen[n]})")
            else:
                seen[n] = section
    return errors


def _number(x):
    return Fraction(x) if not isinstance(x, Fraction) else x


def _field(raw):
    bf = raw.get("base_field", {"type": "rational"})
    if bf["type"] == "rational":
        return QQ
    try:
        return NumberField([_number(c) for c in bf["minpoly"]], bf.get("generator", "a"))
    except FieldError as exc:
        raise SessionError([f"base_field: {exc}"]) from None


def _field_value(x, registry):
    s = parse_scalar(str(x), registry, check=False)
    if not s.is_constant():
        raise SessionError([f"{x!r} is not a base-field element"])
    return s.constant_value()


def _exprs(raw):
    """Every expression string that may mention registry symbols."""
    out = []
    for rel in raw.get("relations", []):
        out += [rel["lhs"], str(rel["rhs"])]
    for t in raw.get("triples", []):
        out += [str(x) for r in t["omega"] for x in r]
    for m in raw.get("motives", []):
        ab = m.get("abelian")
        if ab:
            out += [str(x) for r in ab["period_symbols"] for x in r]
        for pt in m.get("u_abelian") or []:
            out += [str(x) for x in pt or []]
    return out


def _build_registry(raw):
    field_ = _field(raw)
    reg = SymbolRegistry(field_)
    errors = []
    try:
        for s in raw.get("symbols", []):
            kind = s["kind"]
            if kind == LOG_PRIME:
                p = s.get("prime")
                if p is None or s["name"] != f"log{p}":
                    errors.append(f"symbol {s['name']!r}: LogPrime symbols are named log<p> and need 'prime'")
                    continue
                reg.log_prime(p)
            elif kind == LOG_UNIT:
                if "value" not in s:
                    errors.append(f"symbol {s['name']!r}: LogUnit needs a value")
                    continue
                reg.add_symbol(s["name"], LOG_UNIT, _field_value(s["value"], reg))
            else:
                reg.add_symbol(s["name"], kind)
        # primes needed by torus values and log symbols mentioned in expressions
        primes = set()
        for m in raw.get("motives", []):
            for row in m.get("u_torus", []):
                for x in row:
                    v = _field_value(x, reg)
                    if field_.is_rational_element(v) and v != 0:
                        q = field_.to_rational(v)
                        primes |= set(rational_exponents(q)[1])
        for e in _exprs(raw):
            primes |= {int(p) for p in _LOG_RE.findall(e)}
        for p in sorted(primes):
            reg.log_prime(p)
        # bare abelian period and elliptic-log names are registered on first use
        for m in raw.get("motives", []):
            ab = m.get("abelian")
            if ab:
                for r in ab["period_symbols"]:
                    for x in r:
                        if isinstance(x, str) and _IDENT_RE.match(x) and x not in reg and x != field_.name:
                            reg.add_symbol(x, ABELIAN_PERIOD)
            for pt in m.get("u_abelian") or []:
                for x in pt or []:
                    if isinstance(x, str) and _IDENT_RE.match(x) and x not in reg and x != field_.name:
                        reg.add_symbol(x, ELLIPTIC_LOG)
        for rel in raw.get("relations", []):
            reg.add_relation(rel["lhs"], str(rel["rhs"]))
        reg.freeze()
    except (RegistryError, ParseError, FieldError, ZeroDivisionError) as exc:
        errors.append(f"registry: {exc}")
    if errors:
        raise SessionError(errors)
    return reg


def _build_motive(m, reg):
    ab = m.get("abelian")
    datum = None
    if ab:
        datum = AbelianDatum(ab["genus"], tuple(tuple(str(x) for x in r) for r in ab["period_symbols"]),
                             tuple(ab["hodge_cols"]) if "hodge_cols" in ab else None)
    ua = m.get("u_abelian")
    if ua is not None:
        ua = tuple(None if p is None else tuple(str(x) for x in p) for p in ua)
    u = tuple(tuple(_field_value(x, reg) for x in r) for r in m.get("u_torus", []))
    return OneMotive(m["lattice_rank"], m.get("torus_rank", 0), u, tuple(m.get("lattice_torsion", [])),
                     datum, ua, name=m["name"])


def _build_triple(t, reg):
    weights = None
    if "weights" in t:
        weights = {int(w): [tuple(_number(x) for x in v) for v in vs] for w, vs in t["weights"].items()}
    hodge = None
    if "hodge" in t:
        hodge = [tuple(_field_value(x, reg) for x in v) for v in t["hodge"]]
    return PeriodTriple(reg, [[str(x) for x in r] for r in t["omega"]], torsion=t.get("torsion", ()),
                        side=t.get("side", "homological"), require_iso=t.get("iso", False),
                        weights=weights, hodge=hodge, label=t["name"])


def _build_curve(c):
    if c["kind"] == "P1":
        pts = tuple(alb.P1_INFINITY if p == "inf" else _number(p) for p in c["punctures"])
        E = None
    else:
        E = alb.EllipticCurve(_number(c.get("a", 0)), _number(c.get("b", 0)))
        pts = tuple(alb.INFINITY if p in ("O", "inf") else alb.point(_number(p[0]), _number(p[1]))
                    for p in c["punctures"])
    return alb.CurveModel(E, pts, c.get("relation_bound", alb.DEFAULT_BOUND), name=c["name"])


def build_session(raw):
    errors = _names_unique(raw)
    if errors:
        raise SessionError(errors)
    reg = _build_registry(raw)
    motives, triples, curves = {}, {}, {}
    for m in raw.get("motives", []):
        try:
            motives[m["name"]] = _build_motive(m, reg)
        except (MotiveError, RegistryError, ParseError, ValueError) as exc:
            errors.append(f"motive {m['name']!r}: {exc}")
    for t in raw.get("triples", []):
        try:
            triples[t["name"]] = _build_triple(t, reg)
        except (TripleError, RegistryError, ParseError, ValueError, ZeroDivisionError) as exc:
            errors.append(f"triple {t['name']!r}: {exc}")
    for c in raw.get("curves", []):
        try:
            curves[c["name"]] = _build_curve(c)
        except (alb.CurveError, ValueError) as exc:
            errors.append(f"curve {c['name']!r}: {exc}")
    queries = raw.get("queries", [])
    for i, q in enumerate(queries):
        args = q.get("args", {})
        for key, kind in ARGS[q["command"]].items():
            if key not in args:
                errors.append(f"queries/{i}: {q['command']} needs argument {key!r}")
                continue
            ref = args[key]
            if kind == "motive" and ref not in motives and ref not in {m["name"] for m in raw.get("motives", [])}:
                errors.append(f"queries/{i}: unknown motive {ref!r}")
            elif kind == "curve" and ref not in {c["name"] for c in raw.get("curves", [])}:
                errors.append(f"queries/{i}: unknown curve {ref!r}")
            elif kind == "object" and not (isinstance(ref, str) and (
                    _TATE_RE.match(ref) or ref in {m["name"] for m in raw.get("motives", [])}
                    or ref in {t["name"] for t in raw.get("triples", [])})):
                errors.append(f"queries/{i}: unknown object {ref!r}")
    if errors:
        raise SessionError(errors)
    return Session(raw, reg, motives, triples, curves, queries)


# ---------------------------------------------------------------------------
# result formatting


def _fmt(x, reg):
    if isinstance(x, PeriodScalar):
        return x.format()
    return reg.field.format(x)


def _matrix(M, reg):
    return [[_fmt(x, reg) for x in r] for r in M.rows]


def triple_json(T):
    reg = T.registry
    out = {
        "side": T.side,
        "free_rank": T.free_rank,
        "torsion": list(T.torsion),
        "k_dim": T.k_dim,
        "omega": _matrix(T.omega, reg),
        "iso": T.iso,
    }
    if T.weights is not None:
        out["weights"] = {str(w): [list(v) for v in L.vectors()] for w, L in T.weights.steps}
    if T.hodge is not None:
        out["hodge"] = [[reg.field.format(x) for x in v] for v in T.hodge]
    return out


def _hom_json(h, check_filtrations=False):
    reg = h.source.registry
    gens = [{"phi_Z": m.phi_Z.tolist(), "phi_K": _matrix(m.phi_K, reg)} for m in h.generators]
    out = {"rank": h.rank, "torsion": list(h.torsion), "generators": gens}
    if check_filtrations:
        S, T = h.source, h.target
        if S.weights is not None and T.weights is not None:
            out["weights_preserved"] = all(check_weight_preservation(m) for m in h.generators)
        if S.hodge is not None and T.hodge is not None:
            out["hodge_preserved"] = all(check_hodge_preservation(m) for m in h.generators)
    return out


class QueryError(Exception):
    pass


class Runner:
    def __init__(self, session, bound=None, twist=None):
        self.s = session
        self.reg = session.registry
        self.bound = bound
        self.twist = twist

    def obj(self, ref):
        m = _TATE_RE.match(ref)
        if m:
            return tate(int(m.group(1)), self.reg)
        if ref in self.s.motives:
            return realize_BdR(self.s.motives[ref], self.reg)
        return self.s.triples[ref]

    def curve(self, name):
        c = self.s.curves[name]
        if self.bound is not None:
            c = alb.CurveModel(c.curve, c.punctures, self.bound, c.name)
        return c

    def run(self, index, q):
        cmd = q["command"]
        args = q.get("args", {})
        try:
            tag, result = getattr(self, "q_" + cmd)(args)
            return {"index": index, "command": cmd, "tag": tag, "result": result}
        except (TripleError, MotiveError, RegistryError, ArithmeticError, ValueError, QueryError) as exc:
            return {"index": index, "command": cmd, "error": f"{type(exc).__name__}: {exc}"}

    def q_realize(self, a):
        M = self.s.motives[a["motive"]]
        if a.get("side", "BdR") == "dRB":
            return "de-rham-betti-realization", triple_json(realize_dRB(M, self.reg))
        return "betti-de-rham-realization", triple_json(realize_BdR(M, self.reg))

    def q_hom(self, a):
        h = hom_group(self.obj(a["source"]), self.obj(a["target"]))
        return "commuting-square-hom", _hom_json(h, check_filtrations=True)

    def q_dual(self, a):
        return "dual-triple", triple_json(dual(self.obj(a["object"])))

    def q_cartier(self, a):
        ref = a["object"]
        if ref in self.s.motives and self.s.motives[ref].abelian is None:
            M = self.s.motives[ref]
            Ms = cartier_dual_motive(M)
            T = cartier_dual_triple(realize_BdR(M, self.reg))
            R = realize_BdR(Ms, self.reg)
            P = cartier_identification(M)
            iso = find_isomorphism(T, R, hints=[P])
            ident = R.omega @ P.map(lambda x: PeriodScalar.constant(x, self.reg)) == \
                P.map(lambda x: PeriodScalar.constant(x, self.reg)) @ T.omega
            return "cartier-duality", {
                "dual_motive": {"lattice_rank": Ms.lattice_rank, "torus_rank": Ms.torus_rank,
                                "u_torus": [[self.reg.field.format(x) for x in r] for r in Ms.u_torus]},
                "isomorphic": "yes" if iso else "no",
                "matrix_identity": ident,
                "triple": triple_json(T),
            }
        return "cartier-dual-triple", triple_json(cartier_dual_triple(self.obj(ref)))

    def q_tensor(self, a):
        return "tensor-product", triple_json(tensor(self.obj(a["left"]), self.obj(a["right"])))

    def q_twist(self, a):
        r = a.get("r", self.twist)
        if r is None:
            raise QueryError("twist needs 'r' or --twist")
        return "tate-twist", triple_json(tate_twist(self.obj(a["object"]), int(r)))

    def q_hphi(self, a):
        h = period_cohomology(self.obj(a["object"]))
        return "period-cohomology", {"rank": h.rank, "torsion": list(h.torsion),
                                     "lattice": [list(v) for v in h.lattice.vectors()]}

    def q_keru(self, a):
        k = ker_u(self.s.motives[a["motive"]], self.reg)
        return "kernel-of-u", {"rank": k.free_rank, "torsion": list(k.torsion),
                               "lattice": [list(v) for v in k.lattice.vectors()]}

    def q_biext(self, a):
        h = biext_group(self.obj(a["left"]), self.obj(a["right"]))
        out = {"rank": h.rank, "lattice": [list(v) for v in h.lattice.vectors()]}
        if "alternating" in h.extra:
            out["alternating_rank"] = h.extra["alternating"].rank
        return "biextension-tensor-formula", out

    def q_albanese(self, a):
        X = self.curve(a["curve"])
        A = alb.albanese_motive(X)
        k = alb.ker_u1_star(X)
        return "albanese-dual-motive", {
            "curve": X.describe(),
            "lattice_rank": A.lattice_rank,
            "target": A.target,
            "generators": [{str(X.punctures[i]): c for i, c in sorted(g.items())} for g in A.generators],
            "images": [None if p is None else str(p) for p in A.images],
            "kernel": {"rank": k.rank, "basis": [list(v) for v in k.lattice.vectors()],
                       "divisors": k.divisors, "completeness": k.completeness},
        }

    def q_report(self, a):
        X = self.curve(a["curve"])
        qs = a.get("q", [-1, 0, 1, 2])
        rows = alb.period_conjecture_report(X, qs)
        return "period-conjecture-report", {
            "curve": X.describe(),
            "rows": [{"q": r.q, "rank": r.rank, "tag": r.tag, "completeness": r.completeness} for r in rows],
        }

    def q_fullnesscheck(self, a):
        M, N = self.s.motives[a["source"]], self.s.motives[a["target"]]
        TM, TN = realize_BdR(M, self.reg), realize_BdR(N, self.reg)
        h = hom_group(TM, TN)
        hm = hom_motives(M, N, self.reg)
        induced_ok = all(realize_morphism(M, N, F, G, self.reg, TM, TN).commutes() for F, G in hm.pairs)
        # images of motive morphisms must generate the same lattice
        images = [realize_morphism(M, N, F, G, self.reg, TM, TN).phi_Z.flatten() for F, G in hm.pairs]
        same = Lattice(images, TM.free_rank * TN.free_rank) == h.lattice if images or h.rank == 0 else False
        out = {"hom_group": {"rank": h.rank, "torsion": list(h.torsion)},
               "hom_motives": {"rank": hm.rank, "torsion": list(hm.torsion)},
               "induced_morphisms_commute": induced_ok,
               "same_lattice": same,
               "agree": h.invariants() == hm.invariants()}
        return "full-faithfulness", out


def run_session(session, bound=None, twist=None, jobs=1):
    runner = Runner(session, bound, twist)
    items = list(enumerate(session.queries))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda iq: runner.run(*iq), items))
    else:
        results = [runner.run(i, q) for i, q in items]
    return {"schema_version": SCHEMA_VERSION, "results": results}


def results_json(results):
    return json.dumps(results, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def results_table(results):
    lines = []
    for r in results["results"]:
        head = f"[{r['index']}] {r['command']}"
        if "error" in r:
            lines.append(f"{head}  ERROR  {r['error']}")
            continue
        lines.append(f"{head}  ({r['tag']})")
        lines.extend("    " + line for line in _table_body(r["result"]))
    return "\n".join(lines) + "\n"


def _table_body(res):
    if "rows" in res:
        out = [res["curve"], f"{'q':>4}  {'rank':>4}  tag / completeness"]
        for row in res["rows"]:
            out.append(f"{row['q']:>4}  {row['rank']:>4}  {row['tag']} / {row['completeness']}")
        return out
    out = []
    for key in sorted(res):
        val = res[key]
        if key == "omega":
            out.append("omega:")
            width = max((len(x) for r in val for x in r), default=1)
            out += ["  [ " + "  ".join(x.rjust(width) for x in r) + " ]" for r in val]
        elif isinstance(val, dict) and key in ("triple", "kernel", "hom_group", "hom_motives", "dual_motive"):
            out.append(f"{key}:")
            out += ["  " + line for line in _table_body(val)]
        else:
            out.append(f"{key}: {json.dumps(val, sort_keys=True)}")
    return out
