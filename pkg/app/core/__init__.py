"""
精确计算核心：代数、Newton 几何、Puiseux 展开、级数展开与依赖关系
"""
