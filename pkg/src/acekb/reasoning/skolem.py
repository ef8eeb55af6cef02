"""Deterministic skolem individuals. The IRI is a hash of the creating
axiom/rule identifier and the frontier the creation fired on, so re-running
inference never mints duplicate witnesses."""

from __future__ import annotations

import hashlib

from ..model import Iri

SKOLEM_PREFIX = "urn:skolem:"


def skolem_iri(source_id: str, frontier: str) -> Iri:
    digest = hashlib.sha256(f"{source_id}|{frontier}".encode()).hexdigest()[:16]
    return Iri(f"{SKOLEM_PREFIX}{digest}")


def is_skolem(iri: Iri) -> bool:
    return iri.value.startswith(SKOLEM_PREFIX)
