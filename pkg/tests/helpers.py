"""Small builders shared by tests."""

from pathlib import Path

from pinned_auc.models.dataset import Dataset

REPO_ROOT = Path(__file__).resolve().parent.parent
CONFIGS = REPO_ROOT / "configs"


def make_dataset(rows, texts=False):
    """Dataset from (id, score, label, tags) tuples; tags is a string or an iterable."""
    ids, scores, labels, tags = [], [], [], []
    for example_id, score, label, tag in rows:
        ids.append(example_id)
        scores.append(score)
        labels.append(label)
        tags.append(frozenset((tag,)) if isinstance(tag, str) else frozenset(tag))
    text_column = [f"text for {i}" for i in ids] if texts else None
    return Dataset.from_columns(ids, labels, tags, text_column, scores)


def brute_force_half_units(negatives, positives):
    """2·U by enumerating every pair."""
    total = 0
    for n in negatives:
        for p in positives:
            if p > n:
                total += 2
            elif p == n:
                total += 1
    return total
