from .frontier import BfsStats, Frontier, edit_distance_bfs

__all__ = ['BfsStats', 'Frontier', 'edit_distance_bfs']
