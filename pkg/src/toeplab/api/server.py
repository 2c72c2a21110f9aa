"""FastAPI server bootstrap for the toeplab HTTP adapter."""

from __future__ import annotations

from fastapi import FastAPI

from toeplab.api.routes import create_router
from toeplab.application.use_cases import ComputeUseCase, ListExperimentsUseCase, RunExperimentUseCase
from toeplab.core.config import GridConfig
from toeplab.experiments import REGISTRY, DescriptorComputer


def create_app(base_config: GridConfig | None = None) -> FastAPI:
    """Create configured FastAPI application instance."""

    computer = DescriptorComputer()
    app = FastAPI(
        title="toeplab API",
        version="0.1.0",
        description="Toeplitz kernels in the Hardy space: experiments and ad-hoc computations.",
    )
    app.include_router(
        create_router(
            ListExperimentsUseCase(REGISTRY),
            RunExperimentUseCase(REGISTRY, base_config=base_config),
            ComputeUseCase(computer, base_config=base_config),
        )
    )
    return app


def main() -> None:
    """Run API server using uvicorn."""

    import uvicorn

    uvicorn.run("toeplab.api.server:create_app", factory=True, host="127.0.0.1", port=8000, reload=False)


if __name__ == "__main__":
    main()
