from shopminer.cli.config import PipelineConfig, load_config

__all__ = ["PipelineConfig", "load_config"]
