"""Text representation models and a benchmark harness for content-based
microblog recommendation.

Subpackages / modules:
    corpus       tweets, social graph, preprocessing, sources, splits
    bag          sparse n-gram vector models (binary / tf / tf-idf)
    graphs       n-gram co-occurrence graph models
    topics       probabilistic topic models (plsa, lda, llda, hdp, hlda, btm)
    recommend    user models, ranking, chronological / random baselines
    evaluation   average precision, MAP, robustness, timing buckets
    harness      configuration grid, synthetic corpora, experiment runner, CLI
"""

__version__ = "0.1.0"
