"""Package marker for duffing_atlas.model."""
