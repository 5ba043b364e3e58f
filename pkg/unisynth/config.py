UnifyDefaults = {
    "fuel": 10_000,  # recursive calls before FuelExhausted
}

InterpreterDefaults = {
    "fuel": 10_000,
    "checkDecrease": False,
    "relation": "u-rel",  # used when a program carries no decrease relation
}

SearchDefaults = {
    "maxRows": 200,
    "seed": 0,
    "defaultWeight": 1,  # weight of any symbol missing from SymbolWeights
}

# Arbitrary values; only their relative size matters to the search
SymbolWeights = {
    "mgiu": 4,
    "mgi": 3,
    "reduce": 3,
    "more-genid": 2,
    "idem": 1,
    "apply": 1,
    "compose": 2,
    "vars": 1,
    "tuple": 1,
    "wf-ordered": 3,
}

# Highest first; selects which literal of a row the search works on
SymbolPrecedence = [
    "mgiu",
    "mgi",
    "more-genid",
    "reduce",
    "wf-ordered",
    "=",
    "idem",
    "misses",
    "occurs-proper",
    "is-proper",
    "is-var",
    "is-const",
    "is-atom",
]

PrimitiveSymbols = {
    "functions": ["left", "right", "apply", "compose", "replace"],
    "predicates": [
        "=",
        "is-proper",
        "is-atom",
        "is-const",
        "is-var",
        "occurs-proper",
        "misses",
    ],
}

ExitStatus = {
    "ok": 0,
    "negative": 1,  # correct negative answer: bot or a failed check
    "usage": 2,
    "failure": 3,
}
