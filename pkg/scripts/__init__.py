"""
脚本工具
"""
