"""Sentiment classification toolkit: bag-of-words features, linear SVM,
multinomial naive Bayes, and an entropy-criterion random forest, with
corpus loaders and experiment runners."""

from .corpus import (
    Corpus,
    Document,
    FoldPlan,
    concat,
    load_csv,
    load_dir_tree,
    load_imdb_dir,
    load_prefix_labeled,
    load_tsv,
    stratified_kfold,
    stratified_split,
    stratified_split_indices,
    take_per_label,
    write_tsv,
)
from .eval import (
    CvReport,
    EvalReport,
    ExperimentConfig,
    SweepReport,
    accuracy,
    compare,
    load_corpus,
    run_cv,
    run_feature_sweep,
    run_holdout,
)
from .exceptions import (
    ConfigError,
    DataError,
    ModelFormatError,
    ParseError,
    SentkitError,
)
from .preprocess import (
    NEGATION_CUES,
    NEGATION_PREFIX,
    Preprocessor,
    apply_nwn,
    default_stopwords,
    load_stopword_file,
    normalize,
    preprocess_document,
    remove_stopwords,
)
from .forest import EntropyRandomForest
from .naive_bayes import MultinomialNaiveBayes
from .persist import FORMAT_VERSION, ModelBundle, load_model, save_model
from .svm import LinearSvm
from .vectorize import (
    BowVectorizer,
    IdfTable,
    Vocabulary,
    binary_vector,
    build_vocabulary,
    fit_idf,
    tfidf_vector,
    to_csr,
)

__version__ = "0.1.0"
