from .moonshine import main

raise SystemExit(main())
