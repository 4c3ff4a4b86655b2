"""WSDL 1.1 / SAWSDL parsing into an in-memory service collection.

A service interface is a set of operations, each with a set of input and a set
of output parameters.  Parameters are flat named items: every top-level
message part becomes one parameter, or, when a part references an element
whose type is a complex wrapper, each top-level child element of the wrapper
does.  There is no deeper schema recursion.  A ``sawsdl:modelReference`` on
the element (or on the named type it references) populates the parameter's
concept IRI.
"""

from __future__ import annotations

import io
import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, replace
from pathlib import Path
from urllib.parse import urlsplit

from .errors import SvcnetError, UsageError

WSDL_NS = "http://schemas.xmlsoap.org/wsdl/"
XSD_NS = "http://www.w3.org/2001/XMLSchema"
SAWSDL_NS = "http://www.w3.org/ns/sawsdl"
SAWSDL_NS_OLD = "http://www.w3.org/2002/ws/sawsdl/spec/sawsdl#"

COLLECTION_SCHEMA = "svcnet-collection/1"
MANIFEST_NAME = "manifest.json"
_WSDL_SUFFIXES = (".wsdl", ".sawsdl")


class CorpusError(SvcnetError):
    """Unrecoverable problem with a description document."""


def _is_absolute_iri(text: str) -> bool:
    if any(ch.isspace() for ch in text):
        return False
    try:
        return bool(urlsplit(text).scheme)
    except ValueError:
        return False


@dataclass(frozen=True)
class ParameterDesc:
    """One flat operation parameter: a name, an optional XSD type QName and
    an optional ontology concept IRI."""

    name: str
    xsd_type: str | None = None
    concept: str | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("parameter name must be non-empty")
        if self.concept is not None and not _is_absolute_iri(self.concept):
            raise ValueError(f"concept must be an absolute IRI, got {self.concept!r}")


@dataclass(frozen=True)
class OperationDesc:
    """One service operation with its input and output parameter sets."""

    service: str
    name: str
    inputs: frozenset[ParameterDesc]
    outputs: frozenset[ParameterDesc]

    def __post_init__(self) -> None:
        for side, params in (("input", self.inputs), ("output", self.outputs)):
            keys = {(p.name, p.concept) for p in params}
            if len(keys) != len(params):
                raise ValueError(
                    f"duplicate (name, concept) pair in {side}s of {self.service}::{self.name}"
                )

    @property
    def op_id(self) -> str:
        return f"{self.service}::{self.name}"


@dataclass(frozen=True)
class ServiceDesc:
    name: str
    domain: str | None
    operations: tuple[OperationDesc, ...]


@dataclass(frozen=True)
class ServiceCollection:
    services: tuple[ServiceDesc, ...]
    warnings: tuple[str, ...] = ()

    def iter_operations(self):
        for svc in self.services:
            for op in svc.operations:
                yield svc, op

    def operations(self) -> tuple[OperationDesc, ...]:
        return tuple(op for _, op in self.iter_operations())

    def domain_of_operation(self) -> dict[str, str | None]:
        return {op.op_id: svc.domain for svc, op in self.iter_operations()}


@dataclass(frozen=True)
class CollectionStats:
    services: int
    operations: int
    parameters: int
    annotated_parameters: int
    annotation_coverage: float


def collection_stats(coll: ServiceCollection) -> CollectionStats:
    """Counts plus the fraction of parameters that carry a concept IRI."""
    n_params = 0
    n_annotated = 0
    n_ops = 0
    for _, op in coll.iter_operations():
        n_ops += 1
        for p in list(op.inputs) + list(op.outputs):
            n_params += 1
            if p.concept is not None:
                n_annotated += 1
    coverage = n_annotated / n_params if n_params else 0.0
    return CollectionStats(len(coll.services), n_ops, n_params, n_annotated, coverage)


# ---------------------------------------------------------------------------
# WSDL parsing
# ---------------------------------------------------------------------------


@dataclass
class _ElementDecl:
    ns: str
    name: str
    type_raw: str | None
    concept: str | None
    children: list["_ChildDecl"] | None  # inline complex wrapper content


@dataclass
class _ChildDecl:
    name: str | None
    ref_raw: str | None
    type_raw: str | None
    concept: str | None


@dataclass
class _TypeDecl:
    concept: str | None
    children: list[_ChildDecl]


@dataclass
class _Part:
    name: str
    element_raw: str | None
    type_raw: str | None


@dataclass(frozen=True)
class ParsedDescription:
    """One parsed document: its services and any non-fatal warnings."""

    services: tuple[ServiceDesc, ...]
    warnings: tuple[str, ...]


def parse_description(data: bytes, source: str = "<document>") -> ParsedDescription:
    """Parse one WSDL 1.1 document (optionally SAWSDL-annotated).

    Produces one operation entry per portType operation, with message parts
    flattened into parameter sets.  Malformed XML raises :class:`CorpusError`
    with the parser's location; structural oddities become warnings.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise CorpusError(f"{source}: malformed XML: {exc}") from exc

    if root.tag != f"{{{WSDL_NS}}}definitions":
        raise CorpusError(f"{source}: not a WSDL 1.1 document (root {root.tag})")

    warnings: list[str] = []
    nsmap = _collect_prefixes(data)
    doc = _DocumentIndex(root, nsmap, source, warnings)

    service_name = doc.service_name()
    ops: list[OperationDesc] = []
    seen_ops: set[str] = set()
    for pt in root.findall(f"{{{WSDL_NS}}}portType"):
        for op_el in pt.findall(f"{{{WSDL_NS}}}operation"):
            op_name = op_el.get("name")
            if not op_name:
                warnings.append(f"{source}: unnamed operation skipped")
                continue
            if op_name in seen_ops:
                warnings.append(f"{source}: duplicate operation {op_name!r} kept once")
                continue
            seen_ops.add(op_name)
            inputs = doc.message_params(op_el.find(f"{{{WSDL_NS}}}input"), op_name)
            outputs = doc.message_params(op_el.find(f"{{{WSDL_NS}}}output"), op_name)
            if not inputs and not outputs:
                warnings.append(
                    f"{source}: operation {op_name!r} has neither inputs nor outputs"
                )
            ops.append(
                OperationDesc(
                    service=service_name,
                    name=op_name,
                    inputs=frozenset(inputs),
                    outputs=frozenset(outputs),
                )
            )

    svc = ServiceDesc(name=service_name, domain=None, operations=tuple(ops))
    return ParsedDescription(services=(svc,), warnings=tuple(warnings))


def _collect_prefixes(data: bytes) -> dict[str, str]:
    nsmap: dict[str, str] = {}
    for _, (prefix, uri) in ET.iterparse(io.BytesIO(data), events=("start-ns",)):
        nsmap.setdefault(prefix, uri)
    return nsmap


def _model_reference(el: ET.Element, source: str, warnings: list[str]) -> str | None:
    raw = el.get(f"{{{SAWSDL_NS}}}modelReference")
    if raw is None:
        raw = el.get(f"{{{SAWSDL_NS_OLD}}}modelReference")
    if raw is None:
        return None
    iris = raw.split()
    if not iris:
        return None
    if len(iris) > 1:
        warnings.append(
            f"{source}: modelReference lists {len(iris)} IRIs; keeping the first ({iris[0]})"
        )
    if not _is_absolute_iri(iris[0]):
        warnings.append(f"{source}: modelReference {iris[0]!r} is not an absolute IRI; dropped")
        return None
    return iris[0]


class _DocumentIndex:
    """Schema, message and service lookups local to one WSDL document."""

    def __init__(self, root: ET.Element, nsmap: dict[str, str], source: str,
                 warnings: list[str]) -> None:
        self.root = root
        self.nsmap = nsmap
        self.source = source
        self.warnings = warnings
        self.elements: dict[tuple[str, str], _ElementDecl] = {}
        self.elements_by_name: dict[str, _ElementDecl] = {}
        self.types: dict[tuple[str, str], _TypeDecl] = {}
        self.types_by_name: dict[str, _TypeDecl] = {}
        self.messages: dict[str, list[_Part]] = {}
        self._scan_schemas()
        self._scan_messages()

    # -- scanning ----------------------------------------------------------

    def _scan_schemas(self) -> None:
        types_el = self.root.find(f"{{{WSDL_NS}}}types")
        if types_el is None:
            return
        for schema in types_el.iter(f"{{{XSD_NS}}}schema"):
            tns = schema.get("targetNamespace", "")
            for el in schema.findall(f"{{{XSD_NS}}}element"):
                name = el.get("name")
                if not name:
                    continue
                decl = _ElementDecl(
                    ns=tns,
                    name=name,
                    type_raw=el.get("type"),
                    concept=_model_reference(el, self.source, self.warnings),
                    children=self._inline_children(el),
                )
                self.elements[(tns, name)] = decl
                self.elements_by_name.setdefault(name, decl)
            for ct in schema.findall(f"{{{XSD_NS}}}complexType"):
                name = ct.get("name")
                if not name:
                    continue
                decl = _TypeDecl(
                    concept=_model_reference(ct, self.source, self.warnings),
                    children=self._type_children(ct),
                )
                self.types[(tns, name)] = decl
                self.types_by_name.setdefault(name, decl)
            for st in schema.findall(f"{{{XSD_NS}}}simpleType"):
                name = st.get("name")
                if not name:
                    continue
                decl = _TypeDecl(
                    concept=_model_reference(st, self.source, self.warnings),
                    children=[],
                )
                self.types[(tns, name)] = decl
                self.types_by_name.setdefault(name, decl)

    def _inline_children(self, el: ET.Element) -> list[_ChildDecl] | None:
        ct = el.find(f"{{{XSD_NS}}}complexType")
        if ct is None:
            return None
        return self._type_children(ct)

    def _type_children(self, ct: ET.Element) -> list[_ChildDecl]:
        children: list[_ChildDecl] = []
        for group_tag in ("sequence", "all", "choice"):
            group = ct.find(f"{{{XSD_NS}}}{group_tag}")
            if group is None:
                continue
            for child in group.findall(f"{{{XSD_NS}}}element"):
                children.append(
                    _ChildDecl(
                        name=child.get("name"),
                        ref_raw=child.get("ref"),
                        type_raw=child.get("type"),
                        concept=_model_reference(child, self.source, self.warnings),
                    )
                )
        return children

    def _scan_messages(self) -> None:
        for msg in self.root.findall(f"{{{WSDL_NS}}}message"):
            name = msg.get("name")
            if not name:
                continue
            parts = [
                _Part(
                    name=part.get("name", ""),
                    element_raw=part.get("element"),
                    type_raw=part.get("type"),
                )
                for part in msg.findall(f"{{{WSDL_NS}}}part")
            ]
            self.messages.setdefault(name, parts)

    # -- lookups -----------------------------------------------------------

    def service_name(self) -> str:
        services = self.root.findall(f"{{{WSDL_NS}}}service")
        if services:
            if len(services) > 1:
                self.warnings.append(
                    f"{self.source}: multiple service elements; using the first"
                )
            name = services[0].get("name")
            if name:
                return name
        name = self.root.get("name")
        if name:
            return name
        stem = Path(self.source).stem
        return stem or "service"

    def _split_qname(self, raw: str) -> tuple[str | None, str]:
        if ":" in raw:
            prefix, local = raw.split(":", 1)
            return self.nsmap.get(prefix), local
        return self.nsmap.get(""), raw

    def _find_element(self, raw: str) -> _ElementDecl | None:
        ns, local = self._split_qname(raw)
        if ns is not None and (ns, local) in self.elements:
            return self.elements[(ns, local)]
        return self.elements_by_name.get(local)

    def _find_type(self, raw: str | None) -> _TypeDecl | None:
        if raw is None:
            return None
        ns, local = self._split_qname(raw)
        if ns == XSD_NS:
            return None
        if ns is not None and (ns, local) in self.types:
            return self.types[(ns, local)]
        return self.types_by_name.get(local)

    def _concept_for_type(self, raw: str | None) -> str | None:
        decl = self._find_type(raw)
        return decl.concept if decl else None

    # -- flattening --------------------------------------------------------

    def message_params(self, io_el: ET.Element | None, op_name: str) -> list[ParameterDesc]:
        if io_el is None:
            return []
        msg_raw = io_el.get("message")
        if not msg_raw:
            self.warnings.append(f"{self.source}: {op_name}: input/output without message")
            return []
        _, msg_local = self._split_qname(msg_raw)
        parts = self.messages.get(msg_local)
        if parts is None:
            self.warnings.append(f"{self.source}: {op_name}: unknown message {msg_raw!r}")
            return []
        params: list[ParameterDesc] = []
        for part in parts:
            params.extend(self._part_params(part, op_name))
        return _dedupe_params(params)

    def _part_params(self, part: _Part, op_name: str) -> list[ParameterDesc]:
        if part.element_raw:
            decl = self._find_element(part.element_raw)
            if decl is None:
                _, local = self._split_qname(part.element_raw)
                self.warnings.append(
                    f"{self.source}: {op_name}: unresolved element {part.element_raw!r}; "
                    "parameter kept without type or concept"
                )
                return [ParameterDesc(name=local)]
            return self._element_params(decl)
        if part.type_raw:
            concept = self._concept_for_type(part.type_raw)
            name = part.name or "part"
            return [ParameterDesc(name=name, xsd_type=part.type_raw, concept=concept)]
        if part.name:
            self.warnings.append(
                f"{self.source}: {op_name}: part {part.name!r} has neither element nor type"
            )
            return [ParameterDesc(name=part.name)]
        return []

    def _element_params(self, decl: _ElementDecl) -> list[ParameterDesc]:
        children = decl.children
        if children is None and decl.type_raw is not None:
            type_decl = self._find_type(decl.type_raw)
            if type_decl is not None and type_decl.children:
                children = type_decl.children
        if children:
            # Complex wrapper: each top-level child element is one parameter.
            params = []
            for child in children:
                params.extend(self._child_params(child))
            return params
        concept = decl.concept
        if concept is None:
            concept = self._concept_for_type(decl.type_raw)
        return [ParameterDesc(name=decl.name, xsd_type=decl.type_raw, concept=concept)]

    def _child_params(self, child: _ChildDecl) -> list[ParameterDesc]:
        if child.ref_raw:
            target = self._find_element(child.ref_raw)
            if target is None:
                _, local = self._split_qname(child.ref_raw)
                self.warnings.append(
                    f"{self.source}: unresolved element ref {child.ref_raw!r}; "
                    "parameter kept without type or concept"
                )
                return [ParameterDesc(name=local)]
            concept = target.concept
            if concept is None:
                concept = self._concept_for_type(target.type_raw)
            return [ParameterDesc(name=target.name, xsd_type=target.type_raw, concept=concept)]
        if not child.name:
            return []
        concept = child.concept
        if concept is None:
            concept = self._concept_for_type(child.type_raw)
        return [ParameterDesc(name=child.name, xsd_type=child.type_raw, concept=concept)]


def _dedupe_params(params: list[ParameterDesc]) -> list[ParameterDesc]:
    seen: set[tuple[str, str | None]] = set()
    out: list[ParameterDesc] = []
    for p in params:
        key = (p.name, p.concept)
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# Collection loading
# ---------------------------------------------------------------------------


def load_collection(directory: str | Path) -> ServiceCollection:
    """Parse every ``.wsdl``/``.sawsdl`` file under ``directory``.

    Per-file failures become collection warnings, not aborts.  An optional
    ``manifest.json`` (flat mapping of file name to domain label) assigns the
    free-form domain used for community/domain overlap reporting.
    """
    dirpath = Path(directory)
    if not dirpath.is_dir():
        raise UsageError(f"no such directory: {dirpath}")
    files = sorted(p for p in dirpath.iterdir() if p.suffix.lower() in _WSDL_SUFFIXES)
    if not files:
        raise UsageError(f"no descriptions found in {dirpath}")

    warnings: list[str] = []
    domains = _load_manifest(dirpath, warnings)

    services: list[ServiceDesc] = []
    seen_names: set[str] = set()
    for path in files:
        try:
            parsed = parse_description(path.read_bytes(), str(path))
        except (CorpusError, OSError) as exc:
            warnings.append(str(exc))
            continue
        warnings.extend(parsed.warnings)
        domain = domains.get(path.name)
        for svc in parsed.services:
            name = svc.name
            suffix = 2
            while name in seen_names:
                name = f"{svc.name}~{suffix}"
                suffix += 1
            if name != svc.name:
                warnings.append(
                    f"{path}: duplicate service name {svc.name!r} renamed to {name!r}"
                )
            seen_names.add(name)
            ops = tuple(replace(op, service=name) for op in svc.operations)
            services.append(ServiceDesc(name=name, domain=domain, operations=ops))

    return ServiceCollection(services=tuple(services), warnings=tuple(warnings))


def _load_manifest(dirpath: Path, warnings: list[str]) -> dict[str, str]:
    manifest = dirpath / MANIFEST_NAME
    if not manifest.is_file():
        return {}
    try:
        data = json.loads(manifest.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        warnings.append(f"{manifest}: unreadable manifest ignored: {exc}")
        return {}
    if not isinstance(data, dict):
        warnings.append(f"{manifest}: manifest must be a JSON object; ignored")
        return {}
    return {str(k): str(v) for k, v in data.items()}


# ---------------------------------------------------------------------------
# JSON dump (stable round-trip format)
# ---------------------------------------------------------------------------


def collection_to_json(coll: ServiceCollection) -> str:
    """Serialize to the documented collection dump (stable key order)."""

    def param_obj(p: ParameterDesc) -> dict:
        return {"name": p.name, "xsd_type": p.xsd_type, "concept": p.concept}

    def param_key(p: ParameterDesc) -> tuple:
        return (p.name, p.concept or "", p.xsd_type or "")

    doc = {
        "schema": COLLECTION_SCHEMA,
        "services": [
            {
                "name": svc.name,
                "domain": svc.domain,
                "operations": [
                    {
                        "name": op.name,
                        "inputs": [param_obj(p) for p in sorted(op.inputs, key=param_key)],
                        "outputs": [param_obj(p) for p in sorted(op.outputs, key=param_key)],
                    }
                    for op in svc.operations
                ],
            }
            for svc in coll.services
        ],
        "warnings": list(coll.warnings),
    }
    return json.dumps(doc, indent=2) + "\n"


def collection_from_json(text: str) -> ServiceCollection:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"invalid collection dump: {exc}") from exc
    if doc.get("schema") != COLLECTION_SCHEMA:
        raise CorpusError(f"unsupported collection schema: {doc.get('schema')!r}")

    def params(objs: list[dict]) -> frozenset[ParameterDesc]:
        return frozenset(
            ParameterDesc(name=o["name"], xsd_type=o.get("xsd_type"), concept=o.get("concept"))
            for o in objs
        )

    services = tuple(
        ServiceDesc(
            name=s["name"],
            domain=s.get("domain"),
            operations=tuple(
                OperationDesc(
                    service=s["name"],
                    name=o["name"],
                    inputs=params(o.get("inputs", [])),
                    outputs=params(o.get("outputs", [])),
                )
                for o in s.get("operations", [])
            ),
        )
        for s in doc.get("services", [])
    )
    return ServiceCollection(services=services, warnings=tuple(doc.get("warnings", [])))
