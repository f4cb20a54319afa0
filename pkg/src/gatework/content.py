"""Content-addressed attachment store.

Resolves ``AttachmentRef``s to bytes/text for QA checks and the service.
Lookup order: content hash, then uri, then name. The in-memory form is used
by tests and the simulator; the service subclasses nothing, it just points
the store at files on disk via ``put_bytes`` at upload time.
"""

from __future__ import annotations

from gatework.core.types import AttachmentRef, MediaKind, sha256_hex


class ContentStore:
    def __init__(self):
        self._by_hash: dict[str, bytes] = {}
        self._refs: list[AttachmentRef] = []

    def put_bytes(self, name: str, media_kind: MediaKind, data: bytes, uri: str = "") -> AttachmentRef:
        ref = AttachmentRef(name=name, media_kind=media_kind, content_hash=sha256_hex(data), uri=uri or name)
        self._by_hash[ref.content_hash] = data
        self._refs.append(ref)
        return ref

    def put_text(self, name: str, media_kind: MediaKind, text: str, uri: str = "") -> AttachmentRef:
        return self.put_bytes(name, media_kind, text.encode("utf-8"), uri)

    def get_bytes(self, ref: AttachmentRef) -> bytes | None:
        if ref.content_hash in self._by_hash:
            return self._by_hash[ref.content_hash]
        for known in self._refs:
            if known.uri == ref.uri or known.name == ref.name:
                return self._by_hash.get(known.content_hash)
        return None

    def get_text(self, ref: AttachmentRef) -> str | None:
        data = self.get_bytes(ref)
        return data.decode("utf-8", errors="replace") if data is not None else None

    def refs(self) -> tuple[AttachmentRef, ...]:
        return tuple(self._refs)
