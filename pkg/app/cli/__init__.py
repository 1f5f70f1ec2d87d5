"""
命令行与多项式表达式解析
"""
from app.cli.parser import parse_poly
