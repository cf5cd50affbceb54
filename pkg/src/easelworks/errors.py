"""Engine error hierarchy.

Every error that crosses a module boundary derives from EngineError so the
service layer can map them onto protocol error codes uniformly.
"""


class EngineError(Exception):
    """Base class; `code` is the machine-readable identifier used on the wire."""

    code = "engine_error"
    http_status = 400

    def payload(self) -> dict:
        return {"error": self.code, "message": str(self)}


class NotFoundError(EngineError):
    code = "not_found"
    http_status = 404


class UnknownAsset(NotFoundError):
    code = "unknown_asset"


class UnknownItem(NotFoundError):
    code = "unknown_item"


class UnknownNode(NotFoundError):
    code = "unknown_node"


class UnknownJob(NotFoundError):
    code = "unknown_job"


class UnknownPage(NotFoundError):
    code = "unknown_page"


class UnknownEasel(NotFoundError):
    code = "unknown_easel"


class UnknownCollection(NotFoundError):
    code = "unknown_collection"


class UnknownEntry(NotFoundError):
    code = "unknown_entry"


class UnknownDocument(NotFoundError):
    code = "unknown_document"


class UndecodablePayload(EngineError):
    code = "undecodable_payload"
    http_status = 415


class UnsupportedKind(EngineError):
    code = "unsupported_kind"
    http_status = 415


class NonPositiveSize(EngineError):
    code = "non_positive_size"
    http_status = 422


class OutOfRange(EngineError):
    code = "out_of_range"
    http_status = 422


class NonImageLayer(EngineError):
    code = "non_image_layer"
    http_status = 422


class EmptyLayerList(EngineError):
    code = "empty_layer_list"
    http_status = 422


class UnknownInputAsset(EngineError):
    code = "unknown_input_asset"
    http_status = 422


class NotAGeneratedNode(EngineError):
    code = "not_a_generated_node"
    http_status = 409


class CursorOutOfRange(EngineError):
    code = "cursor_out_of_range"
    http_status = 422


class EmptyCanvas(EngineError):
    code = "empty_canvas"
    http_status = 409


class ValidationError(EngineError):
    """Carries the full violation list for an invalid easel spec."""

    code = "validation_error"
    http_status = 422

    def __init__(self, violations: list):
        super().__init__("; ".join(violations) or "invalid spec")
        self.violations = list(violations)

    def payload(self) -> dict:
        return {"error": self.code, "message": str(self), "violations": self.violations}


class UnknownKind(EngineError):
    code = "unknown_kind"
    http_status = 422


class UnknownTemplate(EngineError):
    code = "unknown_template"
    http_status = 422


class MissingPrompt(EngineError):
    code = "missing_prompt"
    http_status = 422


class WrongAssetKind(EngineError):
    code = "wrong_asset_kind"
    http_status = 422


class InvalidGraph(EngineError):
    code = "invalid_graph"
    http_status = 422


class BackendUnavailable(EngineError):
    code = "backend_unavailable"
    http_status = 502


class NotDone(EngineError):
    code = "not_done"
    http_status = 409


class NotCancellable(EngineError):
    code = "not_cancellable"
    http_status = 409


class NotAMember(EngineError):
    code = "not_a_member"
    http_status = 422


class BadIndex(EngineError):
    code = "bad_index"
    http_status = 422


class ConflictError(EngineError):
    code = "conflict"
    http_status = 409
