"""Package marker for duffing_atlas.portrait."""
