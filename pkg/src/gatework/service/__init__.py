from gatework.service.store import TaskStore

__all__ = ["TaskStore"]
