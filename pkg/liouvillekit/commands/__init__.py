"""
子命令汇总
"""

from liouvillekit.commands import diffusion, gaussian, montecarlo, verify
from liouvillekit.commands.router import CommandRouter

command_router = CommandRouter()

command_router.include_router(diffusion.router)
command_router.include_router(gaussian.router)
command_router.include_router(montecarlo.router)
command_router.include_router(verify.router)

__all__ = ["command_router", "CommandRouter"]
