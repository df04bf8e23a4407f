"""Binary model file.

Layout (little-endian throughout)::

    b"AZTX"            magic
    u32                format version
    u8                 kind tag (0 nb, 1 svm, 2 mlp)
    u32                number of blocks
    blocks             each: u64 byte length, then the bytes

Block 0 is canonical JSON (sorted keys, no whitespace) holding the
vectorizer, pipeline config, class names, vocabulary terms and
hyperparameters. Every following block is one array::

    u8 dtype (0 float64, 1 int64), u32 ndim, u64 * ndim shape, raw data

Arrays appear in a fixed order: df, idf (0-d placeholder when absent),
then the classifier parameters.
"""

from __future__ import annotations

import io
import json
import os
import struct
from pathlib import Path

import numpy as np

from ..errors import FormatError, MissingFile, TruncatedFile, VersionError
from ..text import PipelineConfig
from ..vectorize import IdfTable, Vocabulary
from .mlp import MlpModel
from .model import FORMAT_VERSION, TrainedModel
from .nb import NbModel
from .svm import SvmModel

MAGIC = b"AZTX"
KIND_TAGS = {"nb": 0, "svm": 1, "mlp": 2}
_DTYPES = {0: np.dtype("<f8"), 1: np.dtype("<i8")}


def _array_bytes(a: np.ndarray) -> bytes:
    a = np.asarray(a)
    code = 1 if np.issubdtype(a.dtype, np.integer) else 0
    a = np.ascontiguousarray(a, dtype=_DTYPES[code])
    head = struct.pack("<BI", code, a.ndim) + struct.pack(f"<{a.ndim}Q", *a.shape)
    return head + a.tobytes()


def _parse_array(blob: bytes) -> np.ndarray:
    try:
        code, ndim = struct.unpack_from("<BI", blob, 0)
        shape = struct.unpack_from(f"<{ndim}Q", blob, 5)
    except struct.error:
        raise TruncatedFile("array header cut short") from None
    if code not in _DTYPES:
        raise FormatError(f"unknown array dtype code {code}")
    dtype = _DTYPES[code]
    start = 5 + 8 * ndim
    expected = int(np.prod(shape, dtype=np.int64)) * dtype.itemsize
    if len(blob) - start != expected:
        raise FormatError(f"array payload is {len(blob) - start} bytes, expected {expected}")
    return np.frombuffer(blob, dtype=dtype, offset=start).reshape(shape).astype(dtype.newbyteorder("="))


def to_bytes(model: TrainedModel) -> bytes:
    p = model.payload
    meta = {
        "vectorizer": model.vectorizer,
        "idf_log_base": model.idf_log_base,
        "pipeline": model.pipeline.to_dict(),
        "class_names": list(model.class_names),
        "terms": list(model.vocabulary.terms),
        "n_docs": model.vocabulary.n_docs,
    }
    arrays = [model.vocabulary.df, model.idf.idf if model.idf is not None else np.zeros(())]
    if model.kind == "nb":
        meta["hyper"] = {"alpha": p.alpha}
        arrays += [p.log_priors, p.log_likelihoods]
    elif model.kind == "svm":
        meta["hyper"] = {"lambda": p.lam, "epochs": p.epochs, "seed": p.seed}
        arrays += [p.weights, p.biases]
    elif model.kind == "mlp":
        meta["hyper"] = {"sizes": list(p.sizes), "activation": p.activation, "seed": p.seed}
        for w, b in zip(p.weights, p.biases):
            arrays += [w, b]
    else:
        raise ValueError(f"unknown model kind {model.kind!r}")
    blocks = [json.dumps(meta, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")]
    blocks += [_array_bytes(a) for a in arrays]
    out = io.BytesIO()
    out.write(MAGIC)
    out.write(struct.pack("<IBI", model.format_version, KIND_TAGS[model.kind], len(blocks)))
    for block in blocks:
        out.write(struct.pack("<Q", len(block)))
        out.write(block)
    return out.getvalue()


class _Reader:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.buf):
            raise TruncatedFile(f"needed {n} bytes at offset {self.pos}, file has {len(self.buf)}")
        chunk = self.buf[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def from_bytes(buf: bytes) -> TrainedModel:
    r = _Reader(buf)
    if len(buf) < len(MAGIC):
        raise TruncatedFile("file shorter than the magic bytes")
    if r.take(4) != MAGIC:
        raise FormatError("not an aztext model file (bad magic bytes)")
    (version,) = r.unpack("<I")
    if version != FORMAT_VERSION:
        raise VersionError(version, FORMAT_VERSION)
    tag, n_blocks = r.unpack("<BI")
    kinds = {v: k for k, v in KIND_TAGS.items()}
    if tag not in kinds:
        raise FormatError(f"unknown model kind tag {tag}")
    kind = kinds[tag]
    blocks = []
    for _ in range(n_blocks):
        (length,) = r.unpack("<Q")
        blocks.append(r.take(length))
    if r.pos != len(buf):
        raise FormatError(f"{len(buf) - r.pos} trailing bytes after the last block")
    if len(blocks) < 3:
        raise FormatError("model file has too few blocks")
    try:
        meta = json.loads(blocks[0].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"metadata block is not valid JSON: {exc}") from None
    arrays = [_parse_array(b) for b in blocks[1:]]
    df, idf = arrays[0], arrays[1]
    params = arrays[2:]
    try:
        hyper = meta["hyper"]
        if kind == "nb":
            payload = NbModel(params[0], params[1], float(hyper["alpha"]))
        elif kind == "svm":
            payload = SvmModel(params[0], params[1], float(hyper["lambda"]), int(hyper["epochs"]), int(hyper["seed"]))
        else:
            payload = MlpModel(
                tuple(hyper["sizes"]), tuple(params[0::2]), tuple(params[1::2]), hyper["activation"], int(hyper["seed"])
            )
        return TrainedModel(
            kind=kind,
            payload=payload,
            vocabulary=Vocabulary(tuple(meta["terms"]), df, int(meta["n_docs"])),
            vectorizer=meta["vectorizer"],
            pipeline=PipelineConfig.from_dict(meta["pipeline"]),
            class_names=tuple(meta["class_names"]),
            idf=IdfTable(idf) if idf.ndim == 1 else None,
            format_version=version,
            idf_log_base=meta["idf_log_base"],
        )
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise FormatError(f"inconsistent model file: {exc}") from None


def save_model(model: TrainedModel, path) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(to_bytes(model))
    os.replace(tmp, path)


def load_model(path) -> TrainedModel:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"no such model file: {path}")
    return from_bytes(path.read_bytes())
