"""Package marker for duffing_atlas.main."""
