from .adapters import ToolError, decode_adapter, encode_adapter, load_clip, sr_adapter
from .config import (
    ConfigError,
    CodecSpec,
    NO_SR,
    PipelineConfig,
    ProviderSpec,
    SRSpec,
    SourceSpec,
    config_from_dict,
    load_config,
)
from .crops import crop_region, render_crops, saliency_argmax
from .jobs import JobCache, JobFailure, JobRecord, dir_hash, file_hash, job_key
from .pipeline import (
    DistortedVariant,
    PipelineResult,
    make_study_crops,
    planned_jobs,
    run_pipeline,
)

__all__ = [
    "NO_SR",
    "CodecSpec",
    "ConfigError",
    "DistortedVariant",
    "JobCache",
    "JobFailure",
    "JobRecord",
    "PipelineConfig",
    "PipelineResult",
    "ProviderSpec",
    "SRSpec",
    "SourceSpec",
    "ToolError",
    "config_from_dict",
    "crop_region",
    "decode_adapter",
    "dir_hash",
    "encode_adapter",
    "file_hash",
    "job_key",
    "load_clip",
    "load_config",
    "make_study_crops",
    "planned_jobs",
    "render_crops",
    "run_pipeline",
    "saliency_argmax",
    "sr_adapter",
]
