#!/usr/bin/env python3
"""Regenerates the shipped vocabulary packs under crates/core/packs/.

Each pack is a catalog plus fixture graphs in N-Triples and, per fixture, the
expected outcome summary of every constraint. Expected summaries are computed
here by brute force, independently of the Rust checker.

Run from the repository root:  python3 tools/gen_packs.py
"""

import datetime
import json
import re
from collections import defaultdict
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "crates" / "core" / "packs"

NS = {
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
    "disco": "http://rdf-vocabulary.ddialliance.org/discovery#",
    "dcterms": "http://purl.org/dc/terms/",
    "skos": "http://www.w3.org/2004/02/skos/core#",
    "prov": "http://www.w3.org/ns/prov#",
    "qb": "http://purl.org/linked-data/cube#",
}

SEV = {1: "info", 2: "warning", 3: "error"}

SPARQL = ["SPARQL"]
BOTH = ["RDFS/OWL", "CL"]
RDFS = ["RDFS/OWL"]
CL = ["CL"]


def expand(curie):
    if curie.startswith("http"):
        return curie
    prefix, local = curie.split(":", 1)
    return NS[prefix] + local


# ---- terms and graphs -------------------------------------------------------

def I(curie):
    return ("iri", expand(curie))


def L(lex, dt=None, lang=None):
    if lang is None and dt is None:
        dt = NS["xsd"] + "string"
    return ("lit", lex, expand(dt) if dt else NS["rdf"] + "langString", lang)


def INT(n):
    return L(str(n), "xsd:integer")


RDF_TYPE = NS["rdf"] + "type"


def nt_term(t):
    if t[0] == "iri":
        return f"<{t[1]}>"
    _, lex, dt, lang = t
    esc = lex.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    if lang:
        return f'"{esc}"@{lang}'
    if dt == NS["xsd"] + "string":
        return f'"{esc}"'
    return f'"{esc}"^^<{dt}>'


class Graph:
    def __init__(self):
        self.triples = set()

    def add(self, s, p, o):
        self.triples.add((s, expand(p), o))

    def a(self, s, cls):
        self.add(s, "rdf:type", I(cls))

    def to_nt(self):
        lines = sorted(f"{nt_term(s)} <{p}> {nt_term(o)} .\n" for s, p, o in self.triples)
        return "".join(lines)

    # oracle helpers
    def index(self):
        by_sp = defaultdict(list)
        for s, p, o in self.triples:
            by_sp[(s, p)].append(o)
        self._by_sp = by_sp

    def values(self, s, p):
        return self._by_sp.get((s, p), [])

    def typed(self, x, cls):
        return (x, RDF_TYPE, ("iri", cls)) in self.triples

    def instances(self, cls):
        return {s for s, p, o in self.triples if p == RDF_TYPE and o == ("iri", cls)}

    def pairs(self, p, cls=None):
        return {(s, o) for s, q, o in self.triples if q == p and (cls is None or self.typed(s, cls))}


# ---- brute-force semantics ----------------------------------------------------

NUMERIC = {NS["xsd"] + t for t in ("integer", "nonNegativeInteger", "decimal")}


def valid_lexical(lex, dt):
    local = dt[len(NS["xsd"]):] if dt.startswith(NS["xsd"]) else None
    if local == "integer":
        return re.fullmatch(r"[+-]?\d+", lex) is not None
    if local == "nonNegativeInteger":
        return re.fullmatch(r"[+-]?\d+", lex) is not None and (not lex.startswith("-") or set(lex[1:]) == {"0"})
    if local == "date":
        m = re.fullmatch(r"(\d{4})-(\d\d)-(\d\d)(Z|[+-]\d\d:\d\d)?", lex)
        if not m:
            return False
        try:
            datetime.date(int(m[1]), int(m[2]), int(m[3]))
        except ValueError:
            return False
        return True
    return True


def number(t):
    if t[0] != "lit" or t[2] not in NUMERIC or not valid_lexical(t[1], t[2]):
        return None
    return float(t[1])


def compare(op, a, b):
    """None on a type error."""
    x, y = number(a), number(b)
    if x is None or y is None:
        if a[0] == "lit" and b[0] == "lit" and a[2] == b[2] == NS["xsd"] + "date" and not a[3]:
            x, y = a[1], b[1]
        else:
            return None
    return {"<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y, "=": x == y, "!=": x != y}[op]


def lang_ok(tag, rng):
    tag = (tag or "").lower()
    if rng == "*":
        return tag != ""
    return tag == rng or tag.startswith(rng + "-")


def violations(g, fam, p):
    """Distinct (focus, path, value) tuples, mirroring each family's contract."""
    out = set()

    def add(x, path=None, v=None):
        if x[0] != "lit":
            out.add((x, path, v))

    P = lambda k: expand(p[k]) if k in p else None
    cls = P("class")
    if fam == "EXISTENTIAL-QUANTIFICATION":
        for x in g.instances(cls):
            if not g.values(x, P("property")):
                add(x, P("property"))
    elif fam in ("UNIVERSAL-QUANTIFICATION", "CLASS-SPECIFIC-PROPERTY-RANGE"):
        for x in g.instances(cls):
            for v in g.values(x, P("property")):
                if not g.typed(v, P("value-class")):
                    add(x, P("property"), v)
    elif fam == "CONDITIONAL-PROPERTY":
        for x in g.instances(cls):
            if g.values(x, P("if-property")) and not g.values(x, P("then-property")):
                add(x, P("then-property"))
    elif fam.endswith("QUALIFIED-CARDINALITY"):
        n = p["bound"]
        vc = P("value-class")
        for x in g.instances(cls):
            k = sum(1 for v in g.values(x, P("property")) if vc is None or g.typed(v, vc))
            bad = {"MIN": k < n, "MAX": k > n, "EXACT": k != n}[fam.split("-")[0]]
            if bad:
                add(x, P("property"))
    elif fam == "MEMBERSHIP-IN-CONTROLLED-VOCABULARY":
        schemes = [("iri", expand(s)) for s in p["schemes"]]
        for x, v in g.pairs(P("property"), cls):
            if not any(g.values(v, NS["skos"] + "inScheme").count(s) for s in schemes):
                add(x, P("property"), v)
    elif fam == "VALUE-IS-VALID-FOR-DATATYPE":
        dt = P("datatype")
        for s, q, o in g.triples:
            if q != P("property") or (cls and not g.typed(s, cls)):
                continue
            if o[0] != "lit" or not valid_lexical(o[1], dt):
                add(s, q, o)
    elif fam == "INVERSE-FUNCTIONAL-PROPERTY":
        holders = defaultdict(set)
        for x, v in g.pairs(P("property")):
            holders[v].add(x)
        for v, xs in holders.items():
            if len(xs) > 1:
                for x in xs:
                    add(x, P("property"), v)
    elif fam == "LITERAL-RANGE":
        for x, v in g.pairs(P("property"), cls):
            lo = "min" in p and compare("<", v, INT(p["min"])) is True
            hi = "max" in p and compare(">", v, INT(p["max"])) is True
            if lo or hi:
                add(x, P("property"), v)
    elif fam == "DATA-PROPERTY-FACETS":
        tests = {
            "min-inclusive": lambda v, b: compare("<", v, INT(b)) is True,
            "max-inclusive": lambda v, b: compare(">", v, INT(b)) is True,
            "min-exclusive": lambda v, b: compare("<=", v, INT(b)) is True,
            "max-exclusive": lambda v, b: compare(">=", v, INT(b)) is True,
            "min-length": lambda v, b: v[0] == "lit" and len(v[1]) < b,
            "max-length": lambda v, b: v[0] == "lit" and len(v[1]) > b,
        }
        for x, v in g.pairs(P("property"), cls):
            if any(tests[k](v, b) for k, b in p.items() if k in tests):
                add(x, P("property"), v)
    elif fam == "LITERAL-VALUE-COMPARISON":
        for x, v in g.pairs(P("property"), cls):
            for w in g.values(x, P("other-property")):
                if compare(p["operator"], v, w) is False:
                    add(x, P("property"), v)
    elif fam == "LITERAL-PATTERN-MATCHING":
        for x, v in g.pairs(P("property"), cls):
            if v[0] == "lit" and not re.search(p["pattern"], v[1]):
                add(x, P("property"), v)
    elif fam == "IRI-PATTERN-MATCHING":
        for x in g.instances(cls):
            if x[0] == "iri" and not re.search(p["pattern"], x[1]):
                add(x)
    elif fam == "PROPERTY-DOMAIN":
        for x, _ in g.pairs(P("property")):
            if not g.typed(x, cls):
                add(x, P("property"))
    elif fam == "PROPERTY-RANGE":
        for x, v in g.pairs(P("property")):
            if not g.typed(v, cls):
                add(x, P("property"), v)
    elif fam == "CONTEXT-SPECIFIC-VALID-PROPERTIES":
        allowed = {expand(a) for a in p["allowed"]} | {RDF_TYPE}
        for x in g.instances(cls):
            for s, q, o in g.triples:
                if s == x and q not in allowed:
                    add(x, q, o)
    elif fam == "DISJOINT-CLASSES":
        for x in g.instances(cls):
            if g.typed(x, P("other-class")):
                add(x, RDF_TYPE)
    elif fam == "LANGUAGE-TAG-CARDINALITY":
        prop = P("property")
        if "max-per-language" in p:
            per = defaultdict(int)
            for x, v in g.pairs(prop, cls):
                if v[0] == "lit" and v[3]:
                    per[(x, v[3].lower())] += 1
            for (x, tag), k in per.items():
                if k > p["max-per-language"]:
                    add(x, prop, L(tag))
        if "required-language" in p:
            foci = g.instances(cls) if cls else {x for x, _ in g.pairs(prop)}
            for x in foci:
                if not any(v[0] == "lit" and lang_ok(v[3], p["required-language"]) for v in g.values(x, prop)):
                    add(x, prop)
    elif fam == "LANGUAGE-TAG-MATCHING":
        for x, v in g.pairs(P("property"), cls):
            if v[0] == "lit" and not lang_ok(v[3], p["range"]):
                add(x, P("property"), v)
    elif fam == "STRUCTURE-ACYCLICITY":
        prop, depth = P("property"), p.get("max-depth", 20)
        edges = defaultdict(set)
        for s, o in g.pairs(prop):
            edges[s].add(o)
        foci = g.instances(cls) if cls else set(edges)
        for x in foci:
            frontier = {x}
            for _ in range(depth):
                frontier = {o for n in frontier for o in edges[n]}
                if x in frontier:
                    add(x, prop)
                    break
    elif fam == "ALLOWED-VALUES":
        allowed = {("iri", expand(v)) for v in p["values"]}
        for x, v in g.pairs(P("property"), cls):
            if v not in allowed:
                add(x, P("property"), v)
    elif fam == "DECLARED-PROPERTY-COMPLETENESS":
        for x in g.instances(cls):
            frontier = {x}
            for hop in p["path"]:
                frontier = {v for n in frontier for v in g.values(n, expand(hop))}
            for q in frontier:
                if q[0] == "iri" and not g.values(x, q[1]):
                    add(x, q[1])
    else:
        raise ValueError(f"no oracle for {fam}")
    return out


def summary(g, c, limit=None):
    if c.get("status") == "not-implemented":
        return "not-implemented"
    n = len(violations(g, c["family"], c["params"]))
    if n == 0:
        return "ok"
    if limit is not None and n > limit:
        return f"truncated({limit})"
    return f"violated({n})"


# ---- catalogs -----------------------------------------------------------------

def row_table():
    """Every row of the published evaluation tables: vocabulary, id, severity
    (1-3 stars) and whether it was implemented. Rows repeat across tables."""
    return json.loads((Path(__file__).parent / "rows.json").read_text())


def ni(cid, family, severity):
    return {"id": cid, "family": family, "severity": SEV[severity], "status": "not-implemented"}


def eq(cls, prop):
    return "EXISTENTIAL-QUANTIFICATION", {"class": cls, "property": prop}


def cp(cls, if_p, then_p):
    return "CONDITIONAL-PROPERTY", {"class": cls, "if-property": if_p, "then-property": then_p}


MESSAGES = {
    "EXISTENTIAL-QUANTIFICATION": "{focus} has no {path}",
    "CONDITIONAL-PROPERTY": "{focus} has {if-property} but no {then-property}",
    "DECLARED-PROPERTY-COMPLETENESS": "{focus} gives no value for declared component {path}",
    "STRUCTURE-ACYCLICITY": "{focus} reaches itself via {path}",
    "DISJOINT-CLASSES": "{focus} is both a {class} and a {other-class}",
}


def constraint(cid, severity, family, params, expressivity):
    c = {"id": cid, "family": family, "severity": SEV[severity], "params": params, "expressivity": expressivity}
    if family in MESSAGES:
        c["message"] = MESSAGES[family]
    return c


def build_catalog(name, prefix, rows, impl):
    """`impl` maps an unprefixed row id to (family, params, expressivity)."""
    seen, constraints = set(), []
    for r in rows:
        cid = r["id"] if r["id"].startswith(prefix) else prefix + r["id"]
        if cid in seen:
            continue
        short = cid[len(prefix):]
        implemented = any(x["id"] == r["id"] and x["implemented"] for x in rows)
        if implemented:
            fam, params, expr = impl.pop(short)
            constraints.append(constraint(cid, r["severity"], fam, params, expr))
        else:
            fam = re.sub(r"-\d+$", "", short)
            fam = {"COMPARISON-VARIABLES": "COMPARISON"}.get(fam, fam)
            constraints.append(ni(cid, fam, r["severity"]))
        seen.add(cid)
    assert not impl, f"unused definitions: {sorted(impl)}"
    return {"name": name, "vocabulary": name, "prefixes": {k: v for k, v in NS.items() if k not in ("rdf", "rdfs", "xsd")},
            "constraints": constraints}


def ddi_definitions():
    S, SG, LDS, U, V = "disco:Study", "disco:StudyGroup", "disco:LogicalDataSet", "disco:Universe", "disco:Variable"
    eqs = {
        1: (S, "dcterms:identifier"), 2: (V, "disco:representation"), 3: (S, "disco:kindOfData"),
        4: (V, "dcterms:description"), 5: ("disco:Question", "disco:questionText"), 6: (V, "disco:universe"),
        7: (SG, "dcterms:title"), 8: (S, "dcterms:title"), 9: (SG, "dcterms:abstract"), 10: (S, "dcterms:abstract"),
        11: (SG, "dcterms:creator"), 12: (SG, "dcterms:publisher"), 13: (S, "disco:universe"),
        14: (S, "dcterms:creator"), 15: (S, "dcterms:publisher"), 16: (S, "disco:inGroup"),
        17: (LDS, "dcterms:title"), 18: (LDS, "dcterms:identifier"), 19: (LDS, "disco:variable"),
        20: (LDS, "dcterms:rights"), 21: (LDS, "dcterms:accessRights"), 22: (U, "skos:definition"),
        23: (SG, "dcterms:subject"), 24: (S, "dcterms:subject"), 25: (S, "dcterms:temporal"),
        26: (S, "dcterms:spatial"), 27: (S, "disco:product"), 28: (LDS, "dcterms:description"),
        29: (V, "skos:prefLabel"), 30: (U, "skos:prefLabel"), 31: (LDS, "disco:dataFile"),
        32: ("disco:SummaryStatistics", "disco:statisticsVariable"),
        33: ("disco:CategoryStatistics", "disco:statisticsCategory"), 34: ("disco:DataFile", "dcterms:format"),
        35: ("disco:Instrument", "disco:question"), 36: ("disco:Question", "disco:responseDomain"),
        37: (V, "disco:analysisUnit"), 38: ("skos:Concept", "skos:notation"),
        39: ("skos:ConceptScheme", "skos:hasTopConcept"), 40: ("disco:Question", "dcterms:identifier"),
        41: (S, "dcterms:language"), 42: (LDS, "disco:isPublic"), 43: (V, "skos:notation"),
        44: (LDS, "dcterms:subject"), 45: (V, "dcterms:subject"), 46: (V, "disco:concept"),
    }
    d = {f"EXISTENTIAL-QUANTIFICATIONS-{k:02}": (*eq(*v), BOTH) for k, v in eqs.items()}
    cps = {
        1: (V, "disco:representation", "skos:prefLabel"), 2: (V, "dcterms:description", "dcterms:subject"),
        3: (V, "disco:concept", "disco:universe"), 4: (SG, "dcterms:identifier", "dcterms:title"),
        5: (S, "disco:product", "dcterms:temporal"), 6: (LDS, "disco:variable", "dcterms:accessRights"),
    }
    d.update({f"CONDITIONAL-PROPERTIES-{k:02}": (*cp(*v), SPARQL) for k, v in cps.items()})
    prov = {1: (SG, "prov:wasGeneratedBy"), 2: (S, "prov:wasGeneratedBy"), 3: (LDS, "prov:wasGeneratedBy"),
            4: (LDS, "prov:wasAttributedTo")}
    d.update({f"PROVENANCE-{k:02}": (*eq(*v), SPARQL) for k, v in prov.items()})
    lad = {1: (SG, "skos:prefLabel"), 2: (S, "skos:prefLabel"), 3: (LDS, "skos:prefLabel"),
           4: (LDS, "rdfs:comment"), 5: ("skos:ConceptScheme", "skos:prefLabel"), 6: (V, "rdfs:comment")}
    d.update({f"LABELING-AND-DOCUMENTATION-{k:02}": (*eq(*v), SPARQL) for k, v in lad.items()})
    d["DATA-MODEL-CONSISTENCY-05"] = ("DISJOINT-CLASSES", {"class": S, "other-class": SG}, SPARQL)
    d["COMPARISON-VARIABLES-02"] = (*eq(V, "disco:basedOn"), SPARQL)
    d["COMPARISON-VARIABLES-04"] = (*cp(V, "disco:concept", "disco:basedOn"), SPARQL)
    d["COMPARISON-VARIABLES-05"] = (*eq(LDS, "disco:aggregation"), SPARQL)
    d["ALLOWED-VALUES-01"] = ("ALLOWED-VALUES", {"property": "dcterms:accessRights", "class": LDS,
                                                 "values": ["disco:PublicAccess", "disco:RestrictedAccess"]}, CL)
    d["LITERAL-RANGES-01"] = ("LITERAL-RANGE", {"property": "disco:frequency", "min": 0,
                                                "class": "disco:CategoryStatistics"}, BOTH)
    d["INVERSE-FUNCTIONAL-PROPERTIES-01"] = ("INVERSE-FUNCTIONAL-PROPERTY", {"property": "dcterms:identifier"}, RDFS)
    d["INVERSE-FUNCTIONAL-PROPERTIES-02"] = ("INVERSE-FUNCTIONAL-PROPERTY", {"property": "skos:notation"}, RDFS)
    d["CLASS-SPECIFIC-PROPERTY-RANGE-01"] = ("CLASS-SPECIFIC-PROPERTY-RANGE",
                                             {"class": S, "property": "disco:product", "value-class": LDS}, RDFS)
    d["MEMBERSHIP-IN-CONTROLLED-VOCABULARIES-01"] = (
        "MEMBERSHIP-IN-CONTROLLED-VOCABULARY",
        {"property": "disco:kindOfData", "class": S, "schemes": ["disco:KindOfDataScheme"]}, CL)
    d["LITERAL-VALUE-COMPARISON-01"] = ("LITERAL-VALUE-COMPARISON",
                                        {"class": "dcterms:PeriodOfTime", "property": "disco:startDate",
                                         "other-property": "disco:endDate", "operator": "<="}, SPARQL)
    d["CONTEXT-SPECIFIC-VALID-PROPERTIES-01"] = (
        "CONTEXT-SPECIFIC-VALID-PROPERTIES",
        {"class": V, "allowed": ["skos:prefLabel", "skos:notation", "disco:representation", "dcterms:description",
                                 "disco:universe", "disco:concept", "dcterms:subject", "disco:analysisUnit"]}, CL)
    d["DATA-PROPERTY-FACETS-01"] = ("DATA-PROPERTY-FACETS",
                                    {"property": "disco:percentage", "class": "disco:CategoryStatistics",
                                     "min-inclusive": 0, "max-inclusive": 100}, RDFS)
    d["DATA-PROPERTY-FACETS-02"] = ("DATA-PROPERTY-FACETS",
                                    {"property": "skos:notation", "class": V, "max-length": 64}, RDFS)
    d["VALUE-IS-VALID-FOR-DATATYPE-01"] = ("VALUE-IS-VALID-FOR-DATATYPE",
                                           {"property": "disco:startDate", "datatype": "xsd:date"}, SPARQL)
    d["VALUE-IS-VALID-FOR-DATATYPE-02"] = ("VALUE-IS-VALID-FOR-DATATYPE",
                                           {"property": "disco:frequency", "datatype": "xsd:nonNegativeInteger"},
                                           SPARQL)
    return d


def qb_definitions():
    O, DS, DSD = "qb:Observation", "qb:DataSet", "qb:DataStructureDefinition"
    path = ["qb:dataSet", "qb:structure", "qb:component"]
    d = {
        "DATA-MODEL-CONSISTENCY-01": eq(O, "qb:dataSet"),
        "DATA-MODEL-CONSISTENCY-02": eq(DS, "qb:structure"),
        "DATA-MODEL-CONSISTENCY-03": eq(DSD, "qb:component"),
        "DATA-MODEL-CONSISTENCY-04": eq("qb:DimensionProperty", "rdfs:range"),
        "DATA-MODEL-CONSISTENCY-05": ("DECLARED-PROPERTY-COMPLETENESS", {"class": O, "path": path + ["qb:dimension"]}),
        "DATA-MODEL-CONSISTENCY-06": cp("qb:DimensionProperty", "qb:concept", "qb:codeList"),
        "DATA-MODEL-CONSISTENCY-07": cp("qb:ComponentSpecification", "qb:componentRequired", "qb:attribute"),
        "DATA-MODEL-CONSISTENCY-08": eq("qb:SliceKey", "qb:componentProperty"),
        "DATA-MODEL-CONSISTENCY-09": ("UNIVERSAL-QUANTIFICATION",
                                      {"class": "qb:Slice", "property": "qb:observation", "value-class": O}),
        "DATA-MODEL-CONSISTENCY-11": ("DECLARED-PROPERTY-COMPLETENESS", {"class": O, "path": path + ["qb:measure"]}),
        "STRUCTURE-01": ("PROPERTY-DOMAIN", {"property": "qb:structure", "class": DS}),
        "STRUCTURE-02": ("PROPERTY-RANGE", {"property": "qb:structure", "class": DSD}),
    }
    d = {k: (*v, SPARQL) for k, v in d.items()}
    labelled = [DSD, DS, "qb:DimensionProperty", "qb:MeasureProperty"]
    d.update({f"EXISTENTIAL-QUANTIFICATIONS-{i + 1:02}": (*eq(c, "rdfs:label"), BOTH) for i, c in enumerate(labelled)})

    def card(fam, cls, prop, n, vc=None):
        params = {"class": cls, "property": prop, "bound": n}
        if vc:
            params["value-class"] = vc
        return fam, params, BOTH

    d["MINIMUM-QUALIFIED-CARDINALITY-RESTRICTIONS-02"] = card("MIN-QUALIFIED-CARDINALITY", DSD, "qb:component", 1,
                                                              "qb:ComponentSpecification")
    d["MAXIMUM-QUALIFIED-CARDINALITY-RESTRICTIONS-01"] = card("MAX-QUALIFIED-CARDINALITY", O, "qb:dataSet", 1, DS)
    d["EXACT-UNQUALIFIED-CARDINALITY-RESTRICTIONS-01"] = card("EXACT-UNQUALIFIED-CARDINALITY", DS, "qb:structure", 1)
    d["EXACT-QUALIFIED-CARDINALITY-RESTRICTIONS-02"] = card("EXACT-QUALIFIED-CARDINALITY", "qb:Slice",
                                                            "qb:sliceStructure", 1, "qb:SliceKey")
    return d


def skos_definitions():
    C, CS = "skos:Concept", "skos:ConceptScheme"
    d = {
        "LABELING-AND-DOCUMENTATION-01": eq(C, "skos:prefLabel"),
        "LABELING-AND-DOCUMENTATION-02": ("LANGUAGE-TAG-MATCHING", {"property": "skos:prefLabel", "range": "*"}),
        "LABELING-AND-DOCUMENTATION-03": eq(CS, "dcterms:title"),
        "LABELING-AND-DOCUMENTATION-05": eq(C, "skos:definition"),
        "LABELING-AND-DOCUMENTATION-06": ("LITERAL-PATTERN-MATCHING",
                                          {"property": "skos:prefLabel", "pattern": r"^\S(.*\S)?$"}),
        "STRUCTURE-01": eq(C, "skos:inScheme"),
        "STRUCTURE-03": ("DISJOINT-CLASSES", {"class": C, "other-class": "skos:Collection"}),
        "STRUCTURE-04": eq(CS, "skos:hasTopConcept"),
        "STRUCTURE-05": ("PROPERTY-DOMAIN", {"property": "skos:hasTopConcept", "class": CS}),
        "STRUCTURE-06": ("PROPERTY-RANGE", {"property": "skos:broader", "class": C}),
        "STRUCTURE-07": ("UNIVERSAL-QUANTIFICATION", {"class": C, "property": "skos:related", "value-class": C}),
        "STRUCTURE-09": ("IRI-PATTERN-MATCHING", {"class": C, "pattern": "^https?://"}),
        "STRUCTURE-10": ("STRUCTURE-ACYCLICITY", {"property": "skos:broader"}),
        "LANGUAGE-TAG-CARDINALITY-01": ("LANGUAGE-TAG-CARDINALITY",
                                        {"property": "skos:prefLabel", "max-per-language": 1}),
        "LANGUAGE-TAG-CARDINALITY-02": ("LANGUAGE-TAG-CARDINALITY",
                                        {"property": "skos:prefLabel", "class": C, "required-language": "en"}),
        "LANGUAGE-TAG-CARDINALITY-03": ("LANGUAGE-TAG-CARDINALITY",
                                        {"property": "skos:definition", "max-per-language": 1}),
        "LANGUAGE-TAG-CARDINALITY-04": ("LANGUAGE-TAG-CARDINALITY",
                                        {"property": "skos:definition", "required-language": "en"}),
    }
    return {k: (*v, SPARQL) for k, v in d.items()}


# ---- fixtures -------------------------------------------------------------------

def missy():
    """Mirrors the Missy instance counts: 6 study groups, 45 studies,
    159 logical data sets, 1,125 universes; plus 40 variables and 10 concepts."""
    g = Graph()
    base = "http://example.org/missy/"
    n = lambda kind, i: ("iri", f"{base}{kind}/{i}")
    scheme = I("disco:KindOfDataScheme")
    g.a(scheme, "skos:ConceptScheme")
    g.add(scheme, "skos:prefLabel", L("Kind of data", lang="en"))
    concepts = [n("concept", i) for i in range(10)]
    for i, c in enumerate(concepts):
        g.a(c, "skos:Concept")
        g.add(c, "skos:inScheme", scheme)
        g.add(c, "skos:notation", L(f"K{i}"))
    g.add(scheme, "skos:hasTopConcept", concepts[0])
    for i in range(6):
        sg = n("group", i)
        g.a(sg, "disco:StudyGroup")
        g.add(sg, "dcterms:identifier", L(f"SG-{i}"))
    lds = [n("dataset", i) for i in range(159)]
    universes = [n("universe", i) for i in range(1125)]
    variables = [n("variable", i) for i in range(40)]
    for i in range(45):
        s = n("study", i)
        g.a(s, "disco:Study")
        g.add(s, "dcterms:identifier", L(f"ST-{i}"))
        g.add(s, "disco:kindOfData", concepts[i % 10])
        g.add(s, "disco:inGroup", n("group", i % 6))
        g.add(s, "dcterms:language", L("en"))
        g.add(s, "disco:universe", universes[i])
        for d in lds[i::45]:
            g.add(s, "disco:product", d)
    for i, d in enumerate(lds):
        g.a(d, "disco:LogicalDataSet")
        g.add(d, "disco:variable", variables[i % 40])
        g.add(d, "dcterms:rights", L("see study"))
        g.add(d, "dcterms:accessRights", I("disco:PublicAccess" if i % 3 else "disco:RestrictedAccess"))
        g.add(d, "disco:isPublic", L("true", "xsd:boolean"))
        g.add(d, "prov:wasAttributedTo", I("http://example.org/missy/agent/gesis"))
        g.add(d, "rdfs:comment", L(f"data set {i}", lang="en"))
    for i, u in enumerate(universes):
        g.a(u, "disco:Universe")
        g.add(u, "skos:definition", L(f"universe {i}", lang="en"))
        g.add(u, "skos:prefLabel", L(f"U{i}", lang="en"))
    for i, v in enumerate(variables):
        g.a(v, "disco:Variable")
        g.add(v, "skos:prefLabel", L(f"V{i}", lang="en"))
        g.add(v, "skos:notation", L(f"v{i:03}"))
        if i >= 7:
            g.add(v, "disco:representation", scheme)
        if i % 4:
            g.add(v, "dcterms:description", L(f"variable {i}", lang="en"))
        if i < 28:
            g.add(v, "disco:universe", universes[i])
        if i % 5:
            g.add(v, "disco:concept", concepts[i % 10])
        if i % 3 == 0:
            g.add(v, "dcterms:subject", I("http://example.org/missy/topic/labour"))
        if i >= 2:
            g.add(v, "rdfs:seeAlso", I(f"http://example.org/missy/doc/{i}"))
    # 40 periods of time: 30 carry a malformed start date and no end date.
    for i in range(40):
        p = n("period", i)
        g.a(p, "dcterms:PeriodOfTime")
        g.add(lds[i], "dcterms:temporal", p)
        if i < 30:
            g.add(p, "disco:startDate", L("unknown", "xsd:date"))
        else:
            g.add(p, "disco:startDate", L(f"20{i - 20:02}-01-01", "xsd:date"))
            g.add(p, "disco:endDate", L(f"20{i - 20:02}-12-31", "xsd:date"))
    return g


def qb_cube(unlinked=False):
    g = Graph()
    base = "http://example.org/cube/"
    n = lambda kind, i="": ("iri", f"{base}{kind}{i}")
    dsd, ds = n("dsd"), n("dataset")
    g.a(dsd, "qb:DataStructureDefinition")
    g.add(dsd, "rdfs:label", L("Childcare DSD", lang="en"))
    g.a(ds, "qb:DataSet")
    g.add(ds, "rdfs:label", L("Childcare", lang="en"))
    g.add(ds, "qb:structure", dsd)
    comps = [("dimension", n("refPeriod")), ("dimension", n("refArea")), ("measure", n("childcare"))]
    for i, (kind, prop) in enumerate(comps):
        spec = n("component", i)
        g.a(spec, "qb:ComponentSpecification")
        g.add(dsd, "qb:component", spec)
        g.add(spec, f"qb:{kind}", prop)
        g.a(prop, "qb:DimensionProperty" if kind == "dimension" else "qb:MeasureProperty")
        g.add(prop, "rdfs:label", L(prop[1].rsplit("/", 1)[1], lang="en"))
        if kind == "dimension":
            g.add(prop, "rdfs:range", I("skos:Concept"))
            g.add(prop, "qb:concept", n("concept/", i))
            g.add(prop, "qb:codeList", n("codes/", i))
    key, sl = n("sliceKey"), n("slice")
    g.a(key, "qb:SliceKey")
    g.add(key, "qb:componentProperty", n("refArea"))
    g.a(sl, "qb:Slice")
    g.add(sl, "qb:sliceStructure", key)
    for i in range(12):
        o = n("obs/", i)
        g.a(o, "qb:Observation")
        if not (unlinked and i < 4):
            g.add(o, "qb:dataSet", ds)
        if not (unlinked and 4 <= i < 7):
            g.add(o, "http://example.org/cube/refPeriod", L(str(2000 + i), "xsd:gYear"))
        g.add(o, "http://example.org/cube/refArea", n("area/", i % 3))
        g.add(o, "http://example.org/cube/childcare", INT(10 + i))
        if i % 2 == 0:
            g.add(sl, "qb:observation", o)
    if unlinked:
        other = n("otherDataset")
        g.a(other, "qb:DataSet")
        g.add(other, "rdfs:label", L("Other", lang="en"))
        g.add(other, "qb:structure", dsd)
        g.add(n("obs/", 11), "qb:dataSet", other)
    return g


def skos_thesaurus(clean=False):
    g = Graph()
    base = "http://example.org/thesaurus/"
    n = lambda i: ("iri", f"{base}c{i}")
    scheme = ("iri", base + "scheme")
    g.a(scheme, "skos:ConceptScheme")
    g.add(scheme, "dcterms:title", L("Education", lang="en"))
    g.add(scheme, "skos:hasTopConcept", n(0))
    for i in range(8):
        c = n(i)
        g.a(c, "skos:Concept")
        g.add(c, "skos:inScheme", scheme)
        g.add(c, "skos:prefLabel", L(f"concept {i}", lang="en"))
        g.add(c, "skos:prefLabel", L(f"Begriff {i}", lang="de"))
        g.add(c, "skos:definition", L(f"definition {i}", lang="en"))
        if i > 0:
            g.add(c, "skos:broader", n((i - 1) // 2))
    g.add(n(1), "skos:related", n(2))
    if not clean:
        # duplicate English preferred label and a broader 3-cycle a -> b -> c -> a
        g.add(n(3), "skos:prefLabel", L("another concept 3", lang="en"))
        cyc = [("iri", base + x) for x in "abc"]
        for i, c in enumerate(cyc):
            g.a(c, "skos:Concept")
            g.add(c, "skos:inScheme", scheme)
            g.add(c, "skos:prefLabel", L(f"cycle {i}", lang="en"))
            g.add(c, "skos:definition", L(f"cycle member {i}", lang="en"))
            g.add(c, "skos:broader", cyc[(i + 1) % 3])
    return g


# ---- output ---------------------------------------------------------------------

def write_pack(slug, catalog, fixtures):
    d = OUT / slug
    (d / "fixtures").mkdir(parents=True, exist_ok=True)
    (d / "catalog.json").write_text(json.dumps(catalog, indent=2, ensure_ascii=False) + "\n")
    for name, g in fixtures.items():
        g.index()
        expected = {c["id"]: summary(g, c) for c in catalog["constraints"]}
        (d / "fixtures" / f"{name}.nt").write_text(g.to_nt())
        (d / "fixtures" / f"{name}.expected.json").write_text(json.dumps(expected, indent=2) + "\n")
        bad = {k: v for k, v in expected.items() if v not in ("ok", "not-implemented")}
        print(f"{slug}/{name}: {len(g.triples)} triples, {len(bad)} violated")


def main():
    rows = row_table()
    ddi, qb, skos = ([r for r in rows if r["vocabulary"] == v] for v in ("DDI-RDF", "QB", "SKOS"))
    write_pack("ddi-rdf", build_catalog("DDI-RDF", "DISCO-C-", ddi, ddi_definitions()), {"missy": missy()})
    write_pack("qb", build_catalog("QB", "QB-C-", qb, qb_definitions()),
               {"linked": qb_cube(), "unlinked": qb_cube(unlinked=True)})
    write_pack("skos", build_catalog("SKOS", "SKOS-C-", skos, skos_definitions()),
               {"thesaurus": skos_thesaurus(), "clean": skos_thesaurus(clean=True)})


if __name__ == "__main__":
    main()
