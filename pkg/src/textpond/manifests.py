"""Per-document XML manifests and the pond-wide global manifest.

Each document owns one manifest with three sections:

* atomic metadata — seven fixed elements (identifier, title, creator, date,
  format, language, extent) wrapped in ``dmdSec[@role="atomic"]/mdWrap``;
* metadata references — one ``mdRef`` per presentation artifact under
  ``dmdSec[@role="refs"]``, with LABEL = artifact label and XPTR = the
  payload's store-relative URI;
* physical links — ``prmSec/prm[@name,@value]`` cluster memberships
  (e.g. language=fr, company=acme).

The global manifest registers pond-wide resources (stopword lists,
dictionaries, thesauri, taxonomies) as (name, location, type) entries.

Serialization is canonical and byte-stable: UTF-8 with XML declaration,
2-space indentation, attributes in sorted order, leaf elements on one line,
references sorted by label, links by name, resources by name. The grammar is
documented by the DTDs at ``schema/manifest.dtd`` and ``schema/global.dtd``
and enforced programmatically on write and read.
"""

from __future__ import annotations

import os
import re
import xml.etree.ElementTree as ET
import xml.parsers.expat
from dataclasses import dataclass, field
from pathlib import Path

from textpond.errors import (
    NotFound,
    NotRegistered,
    ParseError,
    SchemaViolation,
    StorageFailure,
    UnreadableResource,
)

ATOMIC_ELEMENTS = ("identifier", "title", "creator", "date", "format", "language", "extent")
RESOURCE_TYPES = ("thesaurus", "dictionary", "stopwords", "taxonomy")
ORIGINAL_REF_LABEL = "original_version+classic_presentation"

_CONTROL_RE = re.compile(r"[\x00-\x1f\x7f]")


def _check_xml_safe(value: str, what: str) -> None:
    if _CONTROL_RE.search(value):
        raise SchemaViolation(f"{what} contains control characters: {value!r}")


@dataclass(frozen=True)
class MetadataRef:
    label: str
    xptr: str
    mdtype: str = "OTHER"


@dataclass(frozen=True)
class PhysicalLink:
    name: str
    value: str


@dataclass(frozen=True)
class DocumentManifest:
    doc_id: str
    atomic: dict[str, str]
    refs: tuple[MetadataRef, ...] = ()
    links: tuple[PhysicalLink, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "refs", tuple(sorted(self.refs, key=lambda r: r.label)))
        object.__setattr__(self, "links", tuple(sorted(self.links, key=lambda l: l.name)))
        atomic = {name: self.atomic.get(name, "") for name in ATOMIC_ELEMENTS}
        object.__setattr__(self, "atomic", atomic)

    def validate(self) -> None:
        unknown = set(self.atomic) - set(ATOMIC_ELEMENTS)
        if unknown:
            raise SchemaViolation(f"unknown atomic elements: {sorted(unknown)}")
        if self.atomic.get("identifier") != self.doc_id:
            raise SchemaViolation(
                f"atomic identifier {self.atomic.get('identifier')!r} != doc_id {self.doc_id!r}"
            )
        labels = [r.label for r in self.refs]
        if len(set(labels)) != len(labels):
            raise SchemaViolation("duplicate reference labels")
        if ORIGINAL_REF_LABEL not in labels:
            raise SchemaViolation(f"manifest must reference the original document ({ORIGINAL_REF_LABEL})")
        names = [l.name for l in self.links]
        if len(set(names)) != len(names):
            raise SchemaViolation("duplicate physical link names")
        for link in self.links:
            if not link.value:
                raise SchemaViolation(f"physical link {link.name!r} has an empty value")
            _check_xml_safe(link.name, "link name")
            _check_xml_safe(link.value, "link value")
        for name, value in self.atomic.items():
            _check_xml_safe(value, f"atomic element {name!r}")
        for ref in self.refs:
            _check_xml_safe(ref.label, "reference label")
            _check_xml_safe(ref.xptr, "reference XPTR")
            _check_xml_safe(ref.mdtype, "reference MDTYPE")


@dataclass(frozen=True)
class ResourceEntry:
    name: str
    location: str
    type: str

    def __post_init__(self):
        if self.type not in RESOURCE_TYPES:
            raise SchemaViolation(f"unknown resource type: {self.type!r}")


@dataclass(frozen=True)
class GlobalManifest:
    entries: tuple[ResourceEntry, ...] = ()
    base_dir: Path | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=lambda e: e.name)))

    def validate(self) -> None:
        names = [e.name for e in self.entries]
        if len(set(names)) != len(names):
            raise SchemaViolation("duplicate resource names in global manifest")
        for entry in self.entries:
            if not entry.name or not entry.location:
                raise SchemaViolation("resource entries need non-empty name and location")
            _check_xml_safe(entry.name, "resource name")
            _check_xml_safe(entry.location, "resource location")

    def find(self, name: str) -> ResourceEntry:
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise NotRegistered(f"resource {name!r} is not registered in the global manifest")


def _esc_text(value: str) -> str:
    return value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _esc_attr(value: str) -> str:
    return _esc_text(value).replace('"', "&quot;")


def _leaf(indent: int, tag: str, text: str = "", attrs: dict[str, str] | None = None) -> str:
    pad = "  " * indent
    rendered = "".join(
        f' {k}="{_esc_attr(v)}"' for k, v in sorted((attrs or {}).items())
    )
    if text:
        return f"{pad}<{tag}{rendered}>{_esc_text(text)}</{tag}>"
    if attrs is not None:
        return f"{pad}<{tag}{rendered}/>"
    return f"{pad}<{tag}></{tag}>"


def manifest_to_xml(m: DocumentManifest) -> bytes:
    m.validate()
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    lines.append(f'<manifest id="{_esc_attr(m.doc_id)}">')
    lines.append('  <dmdSec role="atomic">')
    lines.append("    <mdWrap>")
    for name in ATOMIC_ELEMENTS:
        value = m.atomic.get(name, "")
        if value:
            lines.append(_leaf(3, name, value))
        else:
            lines.append(f"      <{name}></{name}>")
    lines.append("    </mdWrap>")
    lines.append("  </dmdSec>")
    lines.append('  <dmdSec role="refs">')
    for ref in m.refs:
        lines.append(_leaf(2, "mdRef", attrs={"LABEL": ref.label, "MDTYPE": ref.mdtype, "XPTR": ref.xptr}))
    lines.append("  </dmdSec>")
    lines.append("  <prmSec>")
    for link in m.links:
        lines.append(_leaf(2, "prm", attrs={"name": link.name, "value": link.value}))
    lines.append("  </prmSec>")
    lines.append("</manifest>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def global_to_xml(g: GlobalManifest) -> bytes:
    g.validate()
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    if g.entries:
        lines.append("<globalManifest>")
        for entry in g.entries:
            lines.append(
                _leaf(1, "resource", attrs={"location": entry.location, "name": entry.name, "type": entry.type})
            )
        lines.append("</globalManifest>")
    else:
        lines.append("<globalManifest></globalManifest>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _parse_xml(data: bytes, what: str) -> ET.Element:
    parser = xml.parsers.expat.ParserCreate()
    try:
        parser.Parse(data, True)
    except xml.parsers.expat.ExpatError as exc:
        offset = getattr(parser, "ErrorByteIndex", None)
        raise ParseError(f"malformed {what}: {exc}", offset=offset) from exc
    return ET.fromstring(data)


def manifest_from_xml(data: bytes) -> DocumentManifest:
    root = _parse_xml(data, "manifest XML")
    if root.tag != "manifest" or "id" not in root.attrib:
        raise ParseError("root element must be <manifest id=...>")
    doc_id = root.attrib["id"]
    atomic: dict[str, str] = {}
    refs: list[MetadataRef] = []
    links: list[PhysicalLink] = []
    for sec in root:
        if sec.tag == "dmdSec" and sec.get("role") == "atomic":
            wrap = sec.find("mdWrap")
            if wrap is None:
                raise ParseError("atomic section lacks mdWrap")
            for el in wrap:
                if el.tag not in ATOMIC_ELEMENTS:
                    raise ParseError(f"unknown atomic element <{el.tag}>")
                atomic[el.tag] = el.text or ""
        elif sec.tag == "dmdSec" and sec.get("role") == "refs":
            for el in sec:
                if el.tag != "mdRef":
                    raise ParseError(f"unexpected element <{el.tag}> in refs section")
                refs.append(
                    MetadataRef(
                        label=el.get("LABEL", ""),
                        xptr=el.get("XPTR", ""),
                        mdtype=el.get("MDTYPE", "OTHER"),
                    )
                )
        elif sec.tag == "prmSec":
            for el in sec:
                if el.tag != "prm":
                    raise ParseError(f"unexpected element <{el.tag}> in prm section")
                links.append(PhysicalLink(name=el.get("name", ""), value=el.get("value", "")))
        else:
            raise ParseError(f"unexpected section <{sec.tag}>")
    manifest = DocumentManifest(doc_id=doc_id, atomic=atomic, refs=tuple(refs), links=tuple(links))
    try:
        manifest.validate()
    except SchemaViolation as exc:
        raise ParseError(f"stored manifest violates the schema: {exc}") from exc
    return manifest


def global_from_xml(data: bytes, base_dir: Path | None = None) -> GlobalManifest:
    root = _parse_xml(data, "global manifest XML")
    if root.tag != "globalManifest":
        raise ParseError("root element must be <globalManifest>")
    entries = []
    for el in root:
        if el.tag != "resource":
            raise ParseError(f"unexpected element <{el.tag}> in global manifest")
        try:
            entries.append(
                ResourceEntry(
                    name=el.get("name", ""),
                    location=el.get("location", ""),
                    type=el.get("type", ""),
                )
            )
        except SchemaViolation as exc:
            raise ParseError(str(exc)) from exc
    g = GlobalManifest(entries=tuple(entries), base_dir=base_dir)
    try:
        g.validate()
    except SchemaViolation as exc:
        raise ParseError(f"stored global manifest violates the schema: {exc}") from exc
    return g


def resolve_resource(g: GlobalManifest, name: str):
    """Load and parse a registered resource.

    Word lists (stopwords, dictionary) parse as one lowercased term per line;
    a thesaurus parses as one comma-separated synonym group per line; a
    taxonomy is returned as its raw non-empty lines.
    """
    entry = g.find(name)
    location = Path(entry.location)
    if not location.is_absolute() and g.base_dir is not None:
        location = g.base_dir / location
    try:
        text = location.read_text("utf-8")
    except OSError as exc:
        raise UnreadableResource(f"cannot read resource {name!r} at {location}: {exc}") from exc
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if entry.type in ("stopwords", "dictionary"):
        return {line.lower() for line in lines}
    if entry.type == "thesaurus":
        return [frozenset(w.strip().lower() for w in line.split(",") if w.strip()) for line in lines]
    return lines


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    try:
        tmp.write_bytes(data)
        os.replace(tmp, path)
    except OSError as exc:
        raise StorageFailure(f"cannot write {path}: {exc}") from exc


class ManifestStore:
    """File-backed manifest collection with an in-memory physical-link index.

    Manifests live at ``<store_root>/manifests/<doc_id>.xml``; the global
    manifest at ``<store_root>/global-manifest.xml``. The link index is
    rebuilt by scanning on startup and kept current on every write.
    """

    def __init__(self, store_root: Path | str):
        self.store_root = Path(store_root)
        self.manifests_dir = self.store_root / "manifests"
        self.manifests_dir.mkdir(parents=True, exist_ok=True)
        self.global_path = self.store_root / "global-manifest.xml"
        # link name -> value -> set of doc ids
        self._link_index: dict[str, dict[str, set[str]]] = {}
        self._rebuild_link_index()

    def _manifest_path(self, doc_id: str) -> Path:
        return self.manifests_dir / f"{doc_id}.xml"

    def _index_links(self, m: DocumentManifest) -> None:
        for link in m.links:
            self._link_index.setdefault(link.name, {}).setdefault(link.value, set()).add(m.doc_id)

    def _drop_from_index(self, doc_id: str) -> None:
        for values in self._link_index.values():
            for ids in values.values():
                ids.discard(doc_id)

    def _rebuild_link_index(self) -> None:
        self._link_index = {}
        for path in sorted(self.manifests_dir.glob("*.xml")):
            self._index_links(manifest_from_xml(path.read_bytes()))

    def write_manifest(self, m: DocumentManifest) -> Path:
        data = manifest_to_xml(m)
        path = self._manifest_path(m.doc_id)
        _atomic_write(path, data)
        self._drop_from_index(m.doc_id)
        self._index_links(m)
        return path

    def read_manifest(self, doc_id: str) -> DocumentManifest:
        path = self._manifest_path(doc_id)
        if not path.exists():
            raise NotFound(f"no manifest for document {doc_id!r}")
        return manifest_from_xml(path.read_bytes())

    def read_manifest_raw(self, doc_id: str) -> bytes:
        path = self._manifest_path(doc_id)
        if not path.exists():
            raise NotFound(f"no manifest for document {doc_id!r}")
        return path.read_bytes()

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.manifests_dir.glob("*.xml"))

    def query_by_physical_link(self, name: str, value: str) -> set[str]:
        return set(self._link_index.get(name, {}).get(value, set()))

    def link_values(self, name: str) -> dict[str, set[str]]:
        """All clusters of one physical link name: value -> doc ids."""
        return {value: set(ids) for value, ids in self._link_index.get(name, {}).items()}

    def link_names(self) -> list[str]:
        return sorted(self._link_index)

    def write_global_manifest(self, g: GlobalManifest) -> Path:
        _atomic_write(self.global_path, global_to_xml(g))
        return self.global_path

    def read_global_manifest(self) -> GlobalManifest:
        if not self.global_path.exists():
            raise NotFound("no global manifest has been written")
        return global_from_xml(self.global_path.read_bytes(), base_dir=self.store_root)

    def read_global_manifest_raw(self) -> bytes:
        if not self.global_path.exists():
            raise NotFound("no global manifest has been written")
        return self.global_path.read_bytes()
