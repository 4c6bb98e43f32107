# -*- coding: utf-8 -*-
"""
chordtex
========

Polifonik piyano segmentleri için akor / doku (texture) ayrıştırmalı VAE
kütüphanesi ve komut satırı aracı.

Alt paketler:
- score: MIDI okuma/yazma, kuantalama, segmentleme, matris kodlama, augmentasyon
- chords: kural tabanlı akor tanıma (36x8 akor matrisi)
- model: akor kodlayıcı/çözücü, doku kodlayıcı, PianoTree çözücü, kayıp
- training: korpus hazırlama ve VAE eğitimi
- control: stil transferi ve doku varyasyonu
- arranger: melodiye koşullu eşlik düzenleme (Transformer)
- evaluation: augmentasyon tabanlı ayrışma ölçümü
"""

__version__ = "1.0.0"
