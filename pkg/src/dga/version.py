"""Engine version; also salts cache keys so stale fragments never survive."""

ENGINE_VERSION = "0.1.0"
