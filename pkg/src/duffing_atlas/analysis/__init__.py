"""Package marker for duffing_atlas.analysis."""
