"""
Feature flags for optional solver behaviour
All features disabled by default so runs stay single-threaded and reproducible
"""

import os
import logging

logger = logging.getLogger(__name__)


class FeatureFlags:
    """Control rollout of optional execution features"""

    # Concurrency
    @property
    def USE_PARALLEL_PARETO(self) -> bool:
        return os.getenv("FEATURE_PARALLEL_PARETO", "false").lower() == "true"

    @property
    def PARETO_WORKERS(self) -> int:
        try:
            workers = int(os.getenv("PARETO_WORKERS", "4"))
        except ValueError:
            logger.warning("PARETO_WORKERS is not an integer, using 4")
            return 4
        return max(1, workers)

    def log_status(self):
        """Log current feature flag status"""
        logger.info("Feature Flags Status:")
        logger.info(f"  USE_PARALLEL_PARETO: {self.USE_PARALLEL_PARETO}")
        logger.info(f"  PARETO_WORKERS: {self.PARETO_WORKERS}")


# Singleton instance for easy access
_flags = FeatureFlags()


if os.getenv("DEBUG", "false").lower() == "true":
    _flags.log_status()
