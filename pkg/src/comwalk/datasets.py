"""Public dataset registry: pinned sources, archive handling, checksums.

Every dataset is a plain-text temporal edge list behind one of three
archive styles. ``fetch`` downloads the archive, verifies its checksum,
extracts the edge file into the data directory and returns its path
together with the column layout needed to load it.

Checksum policy: when a registry entry pins a sha256 the download must
match it; entries without a pin record the digest observed on first
fetch in a sidecar file and verify against that from then on.
"""

from __future__ import annotations

import bz2
import gzip
import hashlib
import io
import tarfile
import urllib.request
import zipfile
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataError
from .graph import LoadOptions, TemporalGraph, load_edge_list


@dataclass(frozen=True)
class DatasetSpec:
    name: str
    url: str
    archive: str  # plain | gz | tar.bz2 | zip
    member: str | None  # file inside tar/zip archives
    options: LoadOptions = field(default_factory=LoadOptions)
    sha256: str | None = None
    expected_nodes: int | None = None
    expected_edges: int | None = None
    seconds_per_unit: float = 1.0


REGISTRY: dict[str, DatasetSpec] = {
    "contact": DatasetSpec(
        name="contact",
        url="http://konect.cc/files/download.tsv.contact.tar.bz2",
        archive="tar.bz2",
        member="contact/out.contact",
        options=LoadOptions(src_col=0, dst_col=1, time_col=3),
        expected_nodes=274,
        expected_edges=28244,
    ),
    "hypertext": DatasetSpec(
        name="hypertext",
        url="http://www.sociopatterns.org/files/datasets/003/ht09_contact_list.dat.gz",
        archive="gz",
        member=None,
        options=LoadOptions(src_col=1, dst_col=2, time_col=0),
        expected_nodes=113,
        expected_edges=20818,
    ),
    "enron": DatasetSpec(
        name="enron",
        url="https://nrvis.com/download/data/ia/ia-enron-employees.zip",
        archive="zip",
        member="ia-enron-employees.edges",
        options=LoadOptions(src_col=0, dst_col=1, time_col=3),
        expected_nodes=151,
        expected_edges=50571,
    ),
    "radoslaw": DatasetSpec(
        name="radoslaw",
        url="https://nrvis.com/download/data/ia/ia-radoslaw-email.zip",
        archive="zip",
        member="ia-radoslaw-email.edges",
        options=LoadOptions(src_col=0, dst_col=1, time_col=3),
        expected_nodes=167,
        expected_edges=82927,
    ),
    "email-eu": DatasetSpec(
        name="email-eu",
        url="https://snap.stanford.edu/data/email-Eu-core-temporal.txt.gz",
        archive="gz",
        member=None,
        options=LoadOptions(src_col=0, dst_col=1, time_col=2),
        expected_nodes=986,
        expected_edges=332334,
    ),
    "fb-forum": DatasetSpec(
        name="fb-forum",
        url="https://nrvis.com/download/data/ia/fb-forum.zip",
        archive="zip",
        member="fb-forum.edges",
        options=LoadOptions(delimiter=",", src_col=0, dst_col=1, time_col=2),
        expected_nodes=899,
        expected_edges=33720,
    ),
    "bitcoin-alpha": DatasetSpec(
        name="bitcoin-alpha",
        url="https://snap.stanford.edu/data/soc-sign-bitcoinalpha.csv.gz",
        archive="gz",
        member=None,
        options=LoadOptions(delimiter=",", src_col=0, dst_col=1, time_col=3),
        expected_nodes=3783,
        expected_edges=24186,
    ),
    "wiki-elec": DatasetSpec(
        name="wiki-elec",
        url="http://konect.cc/files/download.tsv.elec.tar.bz2",
        archive="tar.bz2",
        member="elec/out.elec",
        options=LoadOptions(src_col=0, dst_col=1, time_col=3),
        expected_nodes=7118,
        expected_edges=107071,
    ),
}


def dataset_names() -> list[str]:
    return sorted(REGISTRY)


def edge_file_path(name: str, data_dir) -> Path:
    return Path(data_dir) / name / f"{name}.edges"


def fetch(name: str, data_dir, timeout: float = 120.0, force: bool = False) -> Path:
    """Ensure the dataset's edge file exists locally; download if needed.

    Returns the edge-file path. Raises DataError on checksum mismatch and
    propagates urllib/OS errors when the source is unreachable.
    """
    spec = REGISTRY.get(name)
    if spec is None:
        raise DataError(f"unknown dataset {name!r}; known: {', '.join(dataset_names())}")
    target = edge_file_path(name, data_dir)
    if target.exists() and not force:
        return target
    target.parent.mkdir(parents=True, exist_ok=True)

    with urllib.request.urlopen(spec.url, timeout=timeout) as resp:
        payload = resp.read()
    _verify_checksum(spec, payload, target.parent / f"{name}.sha256")
    target.write_bytes(_extract(spec, payload))
    return target


def _verify_checksum(spec: DatasetSpec, payload: bytes, sidecar: Path) -> None:
    digest = hashlib.sha256(payload).hexdigest()
    pinned = spec.sha256
    if pinned is None and sidecar.exists():
        pinned = sidecar.read_text(encoding="utf-8").strip()
    if pinned is not None:
        if digest != pinned:
            raise DataError(
                f"{spec.name}: downloaded archive sha256 {digest} does not match "
                f"pinned {pinned}"
            )
    else:
        sidecar.write_text(digest + "\n", encoding="utf-8")


def _extract(spec: DatasetSpec, payload: bytes) -> bytes:
    if spec.archive == "plain":
        return payload
    if spec.archive == "gz":
        return gzip.decompress(payload)
    if spec.archive == "tar.bz2":
        with tarfile.open(fileobj=io.BytesIO(bz2.decompress(payload)), mode="r:") as tar:
            member = tar.extractfile(spec.member)
            if member is None:
                raise DataError(f"{spec.name}: member {spec.member!r} missing from archive")
            return member.read()
    if spec.archive == "zip":
        with zipfile.ZipFile(io.BytesIO(payload)) as zf:
            return zf.read(spec.member)
    raise DataError(f"{spec.name}: unknown archive kind {spec.archive!r}")


def load(name: str, data_dir, timeout: float = 120.0) -> TemporalGraph:
    """Fetch (if needed) and parse a registered dataset."""
    spec = REGISTRY[name] if name in REGISTRY else None
    if spec is None:
        raise DataError(f"unknown dataset {name!r}; known: {', '.join(dataset_names())}")
    path = fetch(name, data_dir, timeout=timeout)
    return load_edge_list(path, spec.options)
