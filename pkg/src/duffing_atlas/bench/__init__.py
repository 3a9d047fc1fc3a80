"""Package marker for duffing_atlas.bench."""
