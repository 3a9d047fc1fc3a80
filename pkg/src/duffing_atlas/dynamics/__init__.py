"""Package marker for duffing_atlas.dynamics."""
