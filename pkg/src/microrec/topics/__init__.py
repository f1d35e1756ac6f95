"""Probabilistic topic models over pooled tweet corpora."""

from .pooling import PooledCorpus, pool, extract_biterms
from .labels import LabelSet, extract_llda_labels
from .state import TopicState, save_topic_state, load_topic_state
from .plsa import train_plsa
from .lda import train_lda, train_llda
from .btm import train_btm
from .hdp import train_hdp
from .hlda import train_hlda
from .inference import infer_theta

__all__ = [
    "PooledCorpus",
    "pool",
    "extract_biterms",
    "LabelSet",
    "extract_llda_labels",
    "TopicState",
    "save_topic_state",
    "load_topic_state",
    "train_plsa",
    "train_lda",
    "train_llda",
    "train_btm",
    "train_hdp",
    "train_hlda",
    "infer_theta",
]
