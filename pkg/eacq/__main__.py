from eacq.cli import main

raise SystemExit(main())
