# main.py - chordtex komut satırı giriş noktası
"""
Kullanım:
    python main.py --help
    python main.py preprocess --input midi/ --output data/corpus
    python main.py train --corpus data/corpus --output runs/vae
    python main.py sample --chords "C Am F G" --vae runs/vae/best.pt --output out/ --n 4
"""

import sys

from chordtex.cli import main

if __name__ == "__main__":
    sys.exit(main())
