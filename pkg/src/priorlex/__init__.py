"""priorlex: prior-polarity sentiment lexicon induction and evaluation.

Build word-level prior-polarity lexica from sense-level score resources in
the SentiWordNet 3.0 file format: apply the posterior-to-prior formulae,
blend them with a trained ensemble, evaluate against human-annotated gold
lexica, and score sentences with the result.
"""

__version__ = "0.1.0"

from .ensemble import (
    EnsembleModel,
    build_feature_matrix,
    fit_classifier,
    fit_regressor,
    load_model,
    predict,
    save_model,
    stability_select,
    train_ensemble,
)
from .errors import DataError
from .formulae import (
    FEATURE_NAMES,
    FORMULA_IDS,
    all_formula_features,
    apply_formula,
    baseline_rnd,
    baseline_swnrnd,
    majority_class_label,
    map_polarity,
    prior_score,
    read_lexicon,
    write_lexicon,
)
from .gold_lexica import align_to_swn, filter_all_zero, load_gold
from .sentence_sa import (
    TaggedSentence,
    binarize_dataset,
    classify_sentence_majority,
    coverage,
    filter_stopwords,
    load_dataset,
    score_sentence_avg,
)
from .stopwords import default_stoplist
from .swn_store import (
    SenseProfile,
    SwnStore,
    SynsetEntry,
    lemma_pos_keys,
    parse_swn_file,
    sense_profile,
)

__all__ = [
    "DataError",
    "EnsembleModel",
    "FEATURE_NAMES",
    "FORMULA_IDS",
    "SenseProfile",
    "SwnStore",
    "SynsetEntry",
    "TaggedSentence",
    "__version__",
    "align_to_swn",
    "all_formula_features",
    "apply_formula",
    "baseline_rnd",
    "baseline_swnrnd",
    "binarize_dataset",
    "build_feature_matrix",
    "classify_sentence_majority",
    "coverage",
    "default_stoplist",
    "filter_all_zero",
    "filter_stopwords",
    "fit_classifier",
    "fit_regressor",
    "lemma_pos_keys",
    "load_dataset",
    "load_gold",
    "load_model",
    "majority_class_label",
    "map_polarity",
    "parse_swn_file",
    "predict",
    "prior_score",
    "read_lexicon",
    "save_model",
    "score_sentence_avg",
    "sense_profile",
    "stability_select",
    "train_ensemble",
    "write_lexicon",
]
