"""Backend bridge with direct/api/auto execution modes for CLI and scripting use."""

from __future__ import annotations

import json
import logging
from enum import Enum
from typing import Any, Callable
from urllib import error, request

from toeplab.application.use_cases import ComputeUseCase, ListExperimentsUseCase, RunExperimentUseCase
from toeplab.core.config import GridConfig
from toeplab.core.errors import AppError, ErrorCode, normalize_error
from toeplab.core.payloads import validate_compute_request, validate_run_experiment_request
from toeplab.experiments import REGISTRY, DescriptorComputer

logger = logging.getLogger(__name__)


class ExecutionMode(str, Enum):
    """Supported backend connection strategies."""

    DIRECT = "direct"
    API = "api"
    AUTO = "auto"


class BridgeError(RuntimeError):
    """Failure surfaced by the bridge; ``code`` is None for transport failures."""

    def __init__(self, message: str, *, code: ErrorCode | None = None, status: int | None = None) -> None:
        super().__init__(message)
        self.code = code
        self.status = status


class BackendBridge:
    """Transport adapter that shields callers from backend transport details."""

    def __init__(
        self,
        *,
        mode: str = "auto",
        api_base_url: str = "http://127.0.0.1:8000",
        base_config: GridConfig | None = None,
        list_use_case: ListExperimentsUseCase | None = None,
        run_use_case: RunExperimentUseCase | None = None,
        compute_use_case: ComputeUseCase | None = None,
        timeout: float = 600.0,
    ) -> None:
        self.mode = ExecutionMode(mode)
        self.api_base_url = api_base_url.rstrip("/")
        self.timeout = timeout

        self._list_use_case = list_use_case or ListExperimentsUseCase(REGISTRY)
        self._run_use_case = run_use_case or RunExperimentUseCase(REGISTRY, base_config=base_config)
        self._compute_use_case = compute_use_case or ComputeUseCase(DescriptorComputer(), base_config=base_config)

    def list_experiments(self) -> dict:
        """Experiment listing as ``{"experiments": [{id, description, anchor}, ...]}``."""

        return self._execute(
            payload=None,
            api_path="/v1/experiments",
            direct_call=self._call_direct_list,
            operation_label="experiment listing",
        )

    def run_experiment(
        self,
        *,
        experiment_id: str,
        overrides: dict[str, Any] | None = None,
        seed: int | None = None,
        params: dict[str, Any] | None = None,
    ) -> dict:
        """Run one registered experiment and return its report mapping."""

        payload = {
            "experiment_id": experiment_id,
            "overrides": dict(overrides or {}),
            "seed": seed,
            "params": dict(params or {}),
        }
        return self._execute(
            payload=payload,
            api_path="/v1/experiments/run",
            direct_call=self._call_direct_run,
            operation_label=f"experiment {experiment_id}",
        )

    def compute(
        self,
        *,
        verb: str,
        symbol: Any = None,
        function: Any = None,
        lam: Any = None,
        size: int | None = None,
        overrides: dict[str, Any] | None = None,
        seed: int | None = None,
        params: dict[str, Any] | None = None,
    ) -> dict:
        """Evaluate one compute verb and return its report mapping."""

        payload = {
            "verb": verb,
            "symbol": symbol,
            "function": function,
            "lambda": lam,
            "size": size,
            "overrides": dict(overrides or {}),
            "seed": seed,
            "params": dict(params or {}),
        }
        return self._execute(
            payload=payload,
            api_path="/v1/compute",
            direct_call=self._call_direct_compute,
            operation_label=f"compute {verb}",
        )

    def _execute(
        self,
        *,
        payload: dict | None,
        api_path: str,
        direct_call: Callable[[dict | None], dict],
        operation_label: str,
    ) -> dict:
        if self.mode is ExecutionMode.DIRECT:
            return direct_call(payload)
        if self.mode is ExecutionMode.API:
            return self._call_api(api_path=api_path, payload=payload)

        try:
            return direct_call(payload)
        except BridgeError as exc:
            if exc.code is not None:
                raise
            direct_error: Exception = exc
        except Exception as exc:
            direct_error = exc

        logger.info("%s: direct execution failed (%s), trying API", operation_label, direct_error)
        try:
            return self._call_api(api_path=api_path, payload=payload)
        except BridgeError as api_exc:
            raise BridgeError(
                f"Auto mode failed for {operation_label}: direct={direct_error}; api={api_exc}",
                code=api_exc.code,
                status=api_exc.status,
            ) from api_exc

    def _call_direct_list(self, payload: dict | None) -> dict:
        result = self._list_use_case.execute()
        if not result.ok or result.value is None:
            raise _bridge_error(result.error, "Unknown direct listing error")
        return {"experiments": [info.to_mapping() for info in result.value]}

    def _call_direct_run(self, payload: dict | None) -> dict:
        try:
            canonical = validate_run_experiment_request(payload or {})
        except Exception as exc:
            raise _bridge_error(normalize_error(exc), "Invalid run request") from exc
        result = self._run_use_case.execute(canonical)
        if not result.ok or result.value is None:
            raise _bridge_error(result.error, "Unknown direct run error")
        return result.value.to_mapping()

    def _call_direct_compute(self, payload: dict | None) -> dict:
        try:
            canonical = validate_compute_request(payload or {})
        except Exception as exc:
            raise _bridge_error(normalize_error(exc), "Invalid compute request") from exc
        result = self._compute_use_case.execute(canonical)
        if not result.ok or result.value is None:
            raise _bridge_error(result.error, "Unknown direct compute error")
        return result.value.to_mapping()

    def _call_api(self, *, api_path: str, payload: dict | None) -> dict:
        endpoint = f"{self.api_base_url}{api_path}"
        if payload is None:
            req = request.Request(endpoint, method="GET")
        else:
            req = request.Request(
                endpoint,
                data=json.dumps(payload).encode("utf-8"),
                headers={"Content-Type": "application/json"},
                method="POST",
            )

        try:
            with request.urlopen(req, timeout=self.timeout) as response:
                raw = response.read().decode("utf-8")
        except error.HTTPError as exc:
            detail = exc.read().decode("utf-8", errors="ignore")
            parsed = _extract_api_error(detail)
            if parsed is not None:
                raise BridgeError(
                    f"API request failed ({exc.code}) [{parsed['code']}]: {parsed['message']}",
                    code=_error_code(parsed["code"]),
                    status=exc.code,
                ) from exc
            raise BridgeError(f"API request failed ({exc.code}): {detail}", status=exc.code) from exc
        except error.URLError as exc:
            raise BridgeError(f"API request failed: {exc.reason}") from exc

        return json.loads(raw)


def _bridge_error(app_error: AppError | None, fallback: str) -> BridgeError:
    if app_error is None:
        return BridgeError(fallback, code=ErrorCode.INTERNAL_ERROR)
    return BridgeError(f"[{app_error.code.value}] {app_error.message}", code=app_error.code)


def _error_code(raw: str) -> ErrorCode:
    try:
        return ErrorCode(raw)
    except ValueError:
        return ErrorCode.INTERNAL_ERROR


def _extract_api_error(raw_detail: str) -> dict[str, str] | None:
    try:
        payload = json.loads(raw_detail)
    except json.JSONDecodeError:
        return None

    detail = payload.get("detail") if isinstance(payload, dict) else None
    if not isinstance(detail, dict):
        return None

    code = detail.get("code")
    message = detail.get("message")
    if not isinstance(code, str) or not isinstance(message, str):
        return None
    return {"code": code, "message": message}
