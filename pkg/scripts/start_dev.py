"""
开发环境自检脚本

检查 .env 与依赖，然后运行一组快速验收检查。
"""

import os
import sys
import logging
from pathlib import Path

# 添加项目根目录到Python路径
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

FAST_CHECKS = "lambda_identity,grand_canonical_series,det_triviality,gauge_covariance"


def check_environment():
    """检查环境配置"""
    logger.info("Checking environment configuration...")

    env_file = project_root / ".env"
    if not env_file.exists():
        logger.info(".env file not found, using built-in defaults")
        return True

    from dotenv import load_dotenv
    load_dotenv(env_file)

    level = os.getenv("LOG_LEVEL")
    if level and level.strip().upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        logger.error(f"Invalid LOG_LEVEL in .env: {level}")
        return False

    logger.info("Environment configuration OK")
    return True


def check_dependencies():
    """检查依赖是否安装"""
    logger.info("Checking dependencies...")

    try:
        import numpy
        import scipy
        import pandas
        import pydantic
        import pydantic_settings
        logger.info("All dependencies are installed")
        return True
    except ImportError as e:
        logger.error(f"Missing dependency: {e}")
        logger.info("Please run: pip install -r requirements.txt")
        return False


def run_fast_checks(out_dir: Path) -> int:
    """运行快速验收检查"""
    from liouvillekit.main import main as cli_main

    logger.info(f"Running fast checks: {FAST_CHECKS}")
    return cli_main(["verify-all", "--checks", FAST_CHECKS, "--workers", "1", "--out", str(out_dir)])


def main():
    """主函数"""
    logger.info("Starting liouvillekit development self-check...")

    if not check_environment():
        logger.error("Environment check failed")
        return 1

    if not check_dependencies():
        logger.error("Dependencies check failed")
        return 1

    code = run_fast_checks(project_root / "runs" / "dev-check")
    if code != 0:
        logger.error(f"Fast checks failed with exit code {code}")
        return code

    logger.info("All checks passed!")
    logger.info("Full acceptance run: python -m liouvillekit verify-all --seed 1")
    return 0


if __name__ == "__main__":
    sys.exit(main())
