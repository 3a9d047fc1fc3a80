from duffing_atlas.main.cli import main

raise SystemExit(main())
