"""caltrend: multi-user calendar behavior analytics.

Pipeline: parse and deidentify event logs, label events with work/home
life modes by concept-lexicon matching, extract 11-feature behavioral
vectors, project users to 2-D with weight-adjustable t-SNE, summarize
selections with per-mode topic models and contrastive keywords, and
aggregate temporal heatmaps. Served over an HTTP API with a push
channel for projection progress; driven in batch by the ``caltrend``
command.
"""

from .model import (
    LifeMode,
    ScheduleEvent,
    UserRecord,
    DuplicateEventIdError,
    EmptyUserError,
    build_store,
)
from .ingestion import (
    ParseReport,
    RedactionMap,
    Redactor,
    NameLexicon,
    parse_log,
    parse_file,
    event_to_line,
    write_events,
    scan_pii,
    load_name_lexicon,
)
from .lifemode import (
    ConceptLexicon,
    LabelStats,
    tokenize,
    label_event,
    label_store,
    corpus_stats,
    default_lexicon,
    load_keyword_file,
)
from .features import (
    FEATURE_NAMES,
    FeatureMatrix,
    extract_features,
    build_matrix,
    standardize,
)
from .projection import (
    TsneParams,
    ProjectionResult,
    WEIGHT_PRESETS,
    apply_weights,
    perplexity_calibration,
    tsne,
    project,
    feature_scatter,
    validate_weights,
)
from .topics import (
    TopicModel,
    WordcloudPayload,
    TopicService,
    fit,
    top_keywords,
    diff_scores,
    diff_keywords,
)
from .temporal import (
    DayGridCell,
    WeeklyHeatmap,
    GlyphSummary,
    KeywordDistribution,
    day_grid,
    weekly_heatmap,
    heatmap_diff,
    cell_keywords,
    keyword_distribution,
    glyph_summary,
)
from .synth import (
    PersonaSpec,
    DEFAULT_PERSONAS,
    generate_events,
    write_corpus,
    default_corpus,
    plant_pii,
)

__version__ = "0.1.0"

__all__ = [
    "LifeMode", "ScheduleEvent", "UserRecord", "DuplicateEventIdError",
    "EmptyUserError", "build_store",
    "ParseReport", "RedactionMap", "Redactor", "NameLexicon", "parse_log",
    "parse_file", "event_to_line", "write_events", "scan_pii",
    "load_name_lexicon",
    "ConceptLexicon", "LabelStats", "tokenize", "label_event", "label_store",
    "corpus_stats", "default_lexicon", "load_keyword_file",
    "FEATURE_NAMES", "FeatureMatrix", "extract_features", "build_matrix",
    "standardize",
    "TsneParams", "ProjectionResult", "WEIGHT_PRESETS", "apply_weights",
    "perplexity_calibration", "tsne", "project", "feature_scatter",
    "validate_weights",
    "TopicModel", "WordcloudPayload", "TopicService", "fit", "top_keywords",
    "diff_scores", "diff_keywords",
    "DayGridCell", "WeeklyHeatmap", "GlyphSummary", "KeywordDistribution",
    "day_grid", "weekly_heatmap", "heatmap_diff", "cell_keywords",
    "keyword_distribution", "glyph_summary",
    "PersonaSpec", "DEFAULT_PERSONAS", "generate_events", "write_corpus",
    "default_corpus", "plant_pii",
    "__version__",
]
