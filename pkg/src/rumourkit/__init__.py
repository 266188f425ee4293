"""rumourkit: curate, thread, annotate and analyse rumour conversations."""

from .annostore import AnnotationStore, Judgment, Label, Story
from .corpus import CorpusStore, StorageError
from .ingest import CorpusStats, IngestFilter, ingest_corpus, keyword_match
from .records import MalformedRecordError, TweetRecord, parse_record
from .sampler import RetweetDistribution, SamplePlan, compute_distribution, sample_sources, threshold_sensitivity
from .threads import (
    CorpusReplyProvider,
    MappingReplyProvider,
    Thread,
    ThreadBuildStats,
    build_all,
    build_thread,
    corpus_reply_provider,
)

__version__ = "0.1.0"
