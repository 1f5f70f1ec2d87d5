"""
工具函数初始化
"""
from app.utils.data_loader import load_bindings_from_file, load_pairs_from_csv, save_pairs_to_csv
