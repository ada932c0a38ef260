"""
产物与场数据的存储
"""
