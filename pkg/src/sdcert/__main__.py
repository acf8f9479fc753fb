from sdcert.cli import main
import sys
sys.exit(main())
