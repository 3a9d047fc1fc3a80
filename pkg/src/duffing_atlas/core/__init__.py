"""Package marker for duffing_atlas.core."""
