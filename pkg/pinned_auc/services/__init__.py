"""Business logic: metrics, data generation, scoring, experiments and IO."""
