use super::{Expressivity, Severity};

/// The kind of value a parameter slot accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamKind {
    Class,
    Property,
    /// An ordered list of IRIs.
    ValueSet,
    Number,
    Regex,
    Datatype,
    LanguageRange,
    /// Free text such as regex flags.
    Text,
    /// A comparison operator: `<`, `<=`, `=`, `!=`, `>=`, `>`.
    Operator,
}

impl ParamKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ParamKind::Class => "class",
            ParamKind::Property => "property",
            ParamKind::ValueSet => "value-set",
            ParamKind::Number => "number",
            ParamKind::Regex => "regex",
            ParamKind::Datatype => "datatype",
            ParamKind::LanguageRange => "language-range",
            ParamKind::Text => "text",
            ParamKind::Operator => "operator",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub required: bool,
}

const fn req(name: &'static str, kind: ParamKind) -> ParamSpec {
    ParamSpec { name, kind, required: true }
}

const fn opt(name: &'static str, kind: ParamKind) -> ParamSpec {
    ParamSpec { name, kind, required: false }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    Min,
    Max,
    Exact,
}

/// Selects the checker's compiler for a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    ExistentialQuantification,
    UniversalQuantification,
    ConditionalProperty,
    Cardinality { bound: Bound, qualified: bool },
    MembershipInControlledVocabulary,
    ValueIsValidForDatatype,
    InverseFunctionalProperty,
    LiteralRange,
    LiteralValueComparison,
    DataPropertyFacets,
    LiteralPatternMatching,
    IriPatternMatching,
    ClassSpecificPropertyRange,
    PropertyDomain,
    PropertyRange,
    ContextSpecificValidProperties,
    DisjointClasses,
    LanguageTagCardinality,
    LanguageTagMatching,
    StructureAcyclicity,
    AllowedValues,
    DeclaredPropertyCompleteness,
    /// Catalogued only; constraints of this family cannot be implemented.
    Descriptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySpec {
    pub id: &'static str,
    /// Other spellings accepted in catalogs.
    pub aliases: &'static [&'static str],
    pub kind: FamilyKind,
    pub params: &'static [ParamSpec],
    /// At least one of these parameters must be present.
    pub one_of: &'static [&'static str],
    pub expressivity: Expressivity,
    pub requirement: Option<&'static str>,
    /// Lint flags constraints configured below this level.
    pub min_severity: Option<Severity>,
}

impl FamilySpec {
    pub fn executable(&self) -> bool {
        self.kind != FamilyKind::Descriptive
    }

    pub fn param(&self, name: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|p| p.name == name)
    }
}

use ParamKind::*;

const CARD_UNQ: &[ParamSpec] = &[req("class", Class), req("property", Property), req("bound", Number)];
const CARD_Q: &[ParamSpec] = &[
    req("class", Class),
    req("property", Property),
    req("bound", Number),
    req("value-class", Class),
];

const fn spec(
    id: &'static str,
    aliases: &'static [&'static str],
    kind: FamilyKind,
    params: &'static [ParamSpec],
    expressivity: Expressivity,
) -> FamilySpec {
    FamilySpec { id, aliases, kind, params, one_of: &[], expressivity, requirement: None, min_severity: None }
}

const fn card(id: &'static str, alias: &'static [&'static str], bound: Bound, qualified: bool) -> FamilySpec {
    let params = if qualified { CARD_Q } else { CARD_UNQ };
    spec(id, alias, FamilyKind::Cardinality { bound, qualified }, params, Expressivity::BOTH)
}

const fn descriptive(id: &'static str) -> FamilySpec {
    spec(id, &[], FamilyKind::Descriptive, &[], Expressivity::SPARQL)
}

static FAMILIES: &[FamilySpec] = &[
    spec(
        "EXISTENTIAL-QUANTIFICATION",
        &["EXISTENTIAL-QUANTIFICATIONS"],
        FamilyKind::ExistentialQuantification,
        &[req("class", Class), req("property", Property)],
        Expressivity::BOTH,
    ),
    spec(
        "UNIVERSAL-QUANTIFICATION",
        &["UNIVERSAL-QUANTIFICATIONS"],
        FamilyKind::UniversalQuantification,
        &[req("class", Class), req("property", Property), req("value-class", Class)],
        Expressivity::BOTH,
    ),
    FamilySpec {
        requirement: Some("R-71"),
        ..spec(
            "CONDITIONAL-PROPERTY",
            &["CONDITIONAL-PROPERTIES"],
            FamilyKind::ConditionalProperty,
            &[req("class", Class), req("if-property", Property), req("then-property", Property)],
            Expressivity::SPARQL,
        )
    },
    FamilySpec {
        requirement: Some("R-75"),
        ..card(
            "MIN-QUALIFIED-CARDINALITY",
            &["MINIMUM-QUALIFIED-CARDINALITY-RESTRICTIONS"],
            Bound::Min,
            true,
        )
    },
    card("MAX-QUALIFIED-CARDINALITY", &["MAXIMUM-QUALIFIED-CARDINALITY-RESTRICTIONS"], Bound::Max, true),
    card("EXACT-QUALIFIED-CARDINALITY", &["EXACT-QUALIFIED-CARDINALITY-RESTRICTIONS"], Bound::Exact, true),
    card("MIN-UNQUALIFIED-CARDINALITY", &["MINIMUM-UNQUALIFIED-CARDINALITY-RESTRICTIONS"], Bound::Min, false),
    card("MAX-UNQUALIFIED-CARDINALITY", &["MAXIMUM-UNQUALIFIED-CARDINALITY-RESTRICTIONS"], Bound::Max, false),
    card("EXACT-UNQUALIFIED-CARDINALITY", &["EXACT-UNQUALIFIED-CARDINALITY-RESTRICTIONS"], Bound::Exact, false),
    spec(
        "MEMBERSHIP-IN-CONTROLLED-VOCABULARY",
        &["MEMBERSHIP-IN-CONTROLLED-VOCABULARIES"],
        FamilyKind::MembershipInControlledVocabulary,
        &[req("property", Property), req("schemes", ValueSet), opt("class", Class)],
        Expressivity::CL,
    ),
    FamilySpec {
        min_severity: Some(Severity::Warning),
        ..spec(
            "VALUE-IS-VALID-FOR-DATATYPE",
            &[],
            FamilyKind::ValueIsValidForDatatype,
            &[opt("property", Property), opt("datatype", Datatype), opt("class", Class)],
            Expressivity::BOTH,
        )
    },
    FamilySpec {
        min_severity: Some(Severity::Warning),
        ..spec(
            "INVERSE-FUNCTIONAL-PROPERTY",
            &["INVERSE-FUNCTIONAL-PROPERTIES"],
            FamilyKind::InverseFunctionalProperty,
            &[req("property", Property)],
            Expressivity::RDFS_OWL,
        )
    },
    FamilySpec {
        one_of: &["min", "max"],
        ..spec(
            "LITERAL-RANGE",
            &["LITERAL-RANGES"],
            FamilyKind::LiteralRange,
            &[req("property", Property), opt("min", Number), opt("max", Number), opt("class", Class)],
            Expressivity::BOTH,
        )
    },
    spec(
        "LITERAL-VALUE-COMPARISON",
        &[],
        FamilyKind::LiteralValueComparison,
        &[
            req("property", Property),
            req("other-property", Property),
            req("operator", Operator),
            opt("class", Class),
        ],
        Expressivity::SPARQL,
    ),
    FamilySpec {
        one_of: &["min-inclusive", "max-inclusive", "min-exclusive", "max-exclusive", "min-length", "max-length"],
        ..spec(
            "DATA-PROPERTY-FACETS",
            &[],
            FamilyKind::DataPropertyFacets,
            &[
                req("property", Property),
                opt("class", Class),
                opt("min-inclusive", Number),
                opt("max-inclusive", Number),
                opt("min-exclusive", Number),
                opt("max-exclusive", Number),
                opt("min-length", Number),
                opt("max-length", Number),
            ],
            Expressivity::RDFS_OWL,
        )
    },
    spec(
        "LITERAL-PATTERN-MATCHING",
        &[],
        FamilyKind::LiteralPatternMatching,
        &[req("property", Property), req("pattern", Regex), opt("flags", Text), opt("class", Class)],
        Expressivity::CL,
    ),
    spec(
        "IRI-PATTERN-MATCHING",
        &[],
        FamilyKind::IriPatternMatching,
        &[req("class", Class), req("pattern", Regex), opt("flags", Text)],
        Expressivity::CL,
    ),
    spec(
        "CLASS-SPECIFIC-PROPERTY-RANGE",
        &[],
        FamilyKind::ClassSpecificPropertyRange,
        &[req("class", Class), req("property", Property), req("value-class", Class)],
        Expressivity::BOTH,
    ),
    spec(
        "PROPERTY-DOMAIN",
        &["PROPERTY-DOMAINS"],
        FamilyKind::PropertyDomain,
        &[req("property", Property), req("class", Class)],
        Expressivity::RDFS_OWL,
    ),
    spec(
        "PROPERTY-RANGE",
        &["PROPERTY-RANGES"],
        FamilyKind::PropertyRange,
        &[req("property", Property), req("class", Class)],
        Expressivity::RDFS_OWL,
    ),
    spec(
        "CONTEXT-SPECIFIC-VALID-PROPERTIES",
        &[],
        FamilyKind::ContextSpecificValidProperties,
        &[req("class", Class), req("allowed", ValueSet)],
        Expressivity::CL,
    ),
    FamilySpec {
        min_severity: Some(Severity::Warning),
        ..spec(
            "DISJOINT-CLASSES",
            &[],
            FamilyKind::DisjointClasses,
            &[req("class", Class), req("other-class", Class)],
            Expressivity::RDFS_OWL,
        )
    },
    FamilySpec {
        one_of: &["max-per-language", "required-language"],
        ..spec(
            "LANGUAGE-TAG-CARDINALITY",
            &[],
            FamilyKind::LanguageTagCardinality,
            &[
                req("property", Property),
                opt("class", Class),
                opt("max-per-language", Number),
                opt("required-language", LanguageRange),
            ],
            Expressivity::SPARQL,
        )
    },
    spec(
        "LANGUAGE-TAG-MATCHING",
        &[],
        FamilyKind::LanguageTagMatching,
        &[req("property", Property), req("range", LanguageRange), opt("class", Class)],
        Expressivity::CL,
    ),
    FamilySpec {
        min_severity: Some(Severity::Warning),
        ..spec(
            "STRUCTURE-ACYCLICITY",
            &[],
            FamilyKind::StructureAcyclicity,
            &[req("property", Property), opt("class", Class), opt("max-depth", Number)],
            Expressivity::SPARQL,
        )
    },
    spec(
        "ALLOWED-VALUES",
        &[],
        FamilyKind::AllowedValues,
        &[req("property", Property), req("values", ValueSet), opt("class", Class)],
        Expressivity::BOTH,
    ),
    spec(
        "DECLARED-PROPERTY-COMPLETENESS",
        &[],
        FamilyKind::DeclaredPropertyCompleteness,
        &[req("class", Class), req("path", ValueSet)],
        Expressivity::SPARQL,
    ),
    descriptive("AGGREGATION"),
    descriptive("ASYMMETRIC-OBJECT-PROPERTIES"),
    descriptive("CLASS-EQUIVALENCE"),
    descriptive("CLASS-SPECIFIC-IRREFLEXIVE-OBJECT-PROPERTIES"),
    descriptive("CLASS-SPECIFIC-REFLEXIVE-OBJECT-PROPERTIES"),
    descriptive("COMPARISON"),
    descriptive("CONTEXT-SPECIFIC-EXCLUSIVE-OR-OF-PROPERTIES"),
    descriptive("CONTEXT-SPECIFIC-EXCLUSIVE-OR-OF-PROPERTY-GROUPS"),
    descriptive("CONTEXT-SPECIFIC-INCLUSIVE-OR-OF-PROPERTIES"),
    descriptive("CONTEXT-SPECIFIC-PROPERTY-GROUPS"),
    descriptive("CONTEXT-SPECIFIC-VALID-CLASSES"),
    descriptive("DATA-MODEL-CONSISTENCY"),
    descriptive("DEFAULT-VALUES"),
    descriptive("DISJOINT-PROPERTIES"),
    descriptive("DISJUNCTION"),
    descriptive("EQUIVALENT-PROPERTIES"),
    descriptive("HANDLE-RDF-COLLECTIONS"),
    descriptive("HTML-HANDLING"),
    descriptive("INVERSE-OBJECT-PROPERTIES"),
    descriptive("IRREFLEXIVE-OBJECT-PROPERTIES"),
    descriptive("LABELING-AND-DOCUMENTATION"),
    descriptive("MATHEMATICAL-OPERATIONS"),
    descriptive("NEGATIVE-PROPERTY-CONSTRAINTS"),
    descriptive("OBJECT-PROPERTY-PATHS"),
    descriptive("ORDERING"),
    descriptive("PROVENANCE"),
    descriptive("RECOMMENDED-PROPERTIES"),
    descriptive("REQUIRED-PROPERTIES"),
    descriptive("STRING-OPERATIONS"),
    descriptive("STRUCTURE"),
    descriptive("SUB-PROPERTIES"),
    descriptive("SUBSUMPTION"),
    descriptive("SYMMETRIC-OBJECT-PROPERTIES"),
    descriptive("USE-SUB-SUPER-RELATIONS-IN-VALIDATION"),
    descriptive("VOCABULARY"),
    descriptive("WHITESPACE-HANDLING"),
];

/// All registered families, executable ones first.
pub fn families() -> &'static [FamilySpec] {
    FAMILIES
}

/// Looks a family up by id or alias, ignoring ASCII case.
pub fn family(id: &str) -> Option<&'static FamilySpec> {
    FAMILIES
        .iter()
        .find(|f| f.id.eq_ignore_ascii_case(id) || f.aliases.iter().any(|a| a.eq_ignore_ascii_case(id)))
}
