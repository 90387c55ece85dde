import os

# Keep thread pools small and deterministic under pytest.
os.environ.setdefault("REINFORCED_WALK_WORKERS", "4")
