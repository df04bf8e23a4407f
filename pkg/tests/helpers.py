"""Independent oracles and fixture builders shared by the tests."""

import math

from aztext.corpus import Corpus, Document


def rfc4180_parse(text):
    """Minimal RFC-4180 state machine; deliberately shares nothing with the csv module."""
    rows, row, field = [], [], []
    i, n = 0, len(text)
    quoted = False
    while i < n:
        ch = text[i]
        if quoted:
            if ch == '"':
                if i + 1 < n and text[i + 1] == '"':
                    field.append('"')
                    i += 1
                else:
                    quoted = False
            else:
                field.append(ch)
        elif ch == '"':
            quoted = True
        elif ch == ",":
            row.append("".join(field))
            field = []
        elif ch == "\r" and i + 1 < n and text[i + 1] == "\n":
            pass
        elif ch == "\n":
            row.append("".join(field))
            rows.append(row)
            row, field = [], []
        else:
            field.append(ch)
        i += 1
    if field or row:
        row.append("".join(field))
        rows.append(row)
    return rows


def naive_describe(values):
    xs = sorted(float(v) for v in values)
    n = len(xs)
    total = 0.0
    for x in xs:
        total += x
    mean = total / n
    ss = 0.0
    for x in xs:
        ss += (x - mean) ** 2
    std = math.sqrt(ss / (n - 1)) if n > 1 else 0.0

    def pct(p):
        pos = p * (n - 1)
        lo = int(math.floor(pos))
        hi = min(lo + 1, n - 1)
        return xs[lo] + (xs[hi] - xs[lo]) * (pos - lo)

    return dict(count=n, mean=mean, std=std, min=xs[0], p25=pct(0.25), p50=pct(0.5), p75=pct(0.75), max=xs[-1])


def doc(i, body, category="idman"):
    return Document(f"d{i:03d}", "test", "2019-02-25", category, f"başlıq {i}", body)


def good_body(i):
    # ~150 chars, 5 dot-terminated sentences, unique per i, nothing the scrub rules touch
    words = ["xəbər", "komanda", "oyun", "bazar", "hökumət", "teatr", "alim", "şəhər"]
    parts = [f"{words[(i + k) % 8].capitalize()} nömrə {i} barədə məlumat {k}." for k in range(5)]
    return " ".join(parts)


def cleaning_fixture():
    """50 documents: 40 clean originals, 7 exact duplicates, 3 threshold violators.

    Returns the corpus plus the planted facts an oracle can be checked against.
    """
    cats = ["idman", "siyasət", "iqtisadiyyat", "mədəniyyət"]
    originals = [doc(i, good_body(i), cats[i % 4]) for i in range(40)]
    dupes = [doc(100 + k, originals[k * 5].body, originals[k * 5].category) for k in range(7)]
    violators = [
        doc(200, "Qısa xəbər.", "idman"),  # 11 chars
        doc(201, "Bu xəbərdə nöqtə yoxdur amma mətn kifayət qədər uzundur", "siyasət"),  # 0 sentences
        doc(202, "Cümlə. " * 120, "iqtisadiyyat"),  # 120 sentences
    ]
    docs = originals[:10] + dupes[:3] + originals[10:25] + violators[:2] + dupes[3:] + originals[25:] + violators[2:]
    return Corpus(docs), {"duplicates": 7, "violators": 3, "survivors": 40}


def bayes_oracle(docs, labels, n_classes, n_terms, alpha, x):
    """Log-posteriors (up to the shared evidence term) by plain loops over dicts.

    ``docs`` and ``x`` are {term_index: count} dicts.
    """
    n = len(docs)
    out = []
    for c in range(n_classes):
        members = [d for d, y in zip(docs, labels) if y == c]
        if not members:
            out.append(float("-inf"))
            continue
        prior = len(members) / n
        totals = [0.0] * n_terms
        for d in members:
            for t, v in d.items():
                totals[t] += v
        denom = sum(totals) + alpha * n_terms
        score = math.log(prior)
        for t, v in x.items():
            score += v * math.log((totals[t] + alpha) / denom)
        out.append(score)
    return out


def random_nb_instance(rng):
    n_terms = int(rng.integers(1, 6))
    n_classes = int(rng.integers(2, 4))
    docs, labels = [], []
    for c in range(n_classes):
        for _ in range(int(rng.integers(1, 5))):
            d = {t: float(rng.integers(1, 4)) for t in range(n_terms) if rng.random() < 0.6}
            docs.append(d)
            labels.append(c)
    x = {t: float(rng.integers(1, 4)) for t in range(n_terms) if rng.random() < 0.5}
    alpha = float(rng.choice([0.1, 0.5, 1.0, 2.0]))
    return docs, labels, n_classes, n_terms, alpha, x
