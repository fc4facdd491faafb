"""Connectivity of the router communication graph.

Two routers are linked when their disks touch or overlap: squared center
distance at most (2r)^2, boundary included. The placement is connected
when the link graph has a single component.
"""

from collections import deque

from .region import Cell


def are_linked(a: Cell, b: Cell, radius: int) -> bool:
    dx = a.x - b.x
    dy = a.y - b.y
    return dx * dx + dy * dy <= 4 * radius * radius


def build_adjacency(placement) -> list[list[int]]:
    """Symmetric neighbor lists under are_linked, no self-loops."""
    centers = placement.centers
    n = len(centers)
    adj = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if are_linked(centers[i], centers[j], placement.radius):
                adj[i].append(j)
                adj[j].append(i)
    return adj


def is_connected(placement) -> bool:
    """True when every router can reach every other through link hops.
    A single router is trivially connected."""
    n = len(placement.centers)
    if n == 0:
        raise ValueError("empty placement")
    if n == 1:
        return True
    adj = build_adjacency(placement)
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                queue.append(v)
    return count == n
