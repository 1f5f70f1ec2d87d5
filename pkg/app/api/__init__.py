"""
API初始化
""" 