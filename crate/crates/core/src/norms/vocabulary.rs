use crate::formula::PredicateSymbol;

/// The single constant used when theorems are checked: systems, actions and counterfactual
/// contexts all range over it.
pub const DOMAIN_CONSTANT: &str = "d0";

/// (name, arity, meaning)
const SYMBOLS: &[(&str, usize, &str)] = &[
    ("ethical", 1, "system x is ethical"),
    ("guidelines", 1, "system x follows ethical guidelines"),
    ("fair", 1, "system x is fair"),
    ("bias", 1, "system x is biased"),
    ("learns", 1, "system x learns iteratively"),
    ("inherent_xai", 1, "system x is explainable by design"),
    ("retrofit_xai", 1, "system x is explained after the fact"),
    ("cf", 2, "system x is counterfactually fair in context c"),
    ("transparent", 1, "system x is transparent"),
    ("ethical_action", 1, "action a is ethical"),
    ("fair_train", 1, "system x is fair during training"),
    ("fair_deploy", 1, "system x is fair during deployment"),
    ("performs", 2, "system x performs action a"),
    ("bm", 1, "bias mitigation is applied to system x"),
    ("bias_train", 1, "system x is biased during training"),
    ("bias_deploy", 1, "system x is biased during deployment"),
];

/// Predicate symbols available to axioms and theorems, in a fixed order.
pub fn ethics_vocabulary() -> Vec<PredicateSymbol> {
    SYMBOLS
        .iter()
        .map(|&(n, a, _)| PredicateSymbol::new(n, a))
        .collect()
}

/// One-line gloss for a vocabulary symbol.
pub fn describe(name: &str) -> Option<&'static str> {
    SYMBOLS.iter().find(|s| s.0 == name).map(|s| s.2)
}
