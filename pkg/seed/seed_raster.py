"""Seed file for the raster initialization demo.

This script writes a 128 x 128 label image and its JSON sidecar to
configs/data/ for configs/raster_demo.toml:
- Pixel value 200: an L-shaped region (phase 0)
- Pixel value 100: a disk (phase 1)
- Pixel value 0: background (ambient phase 2)
"""

import sys
import os

import numpy as np

# Add parent directory to path to import from src
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.services.output_service import write_json, write_image

SIZE = 128
OUTPUT_DIR = os.path.join(os.path.dirname(__file__), '..', 'configs', 'data')
LABELS = {'200': 0, '100': 1, '0': 2}


def build_labels(size: int = SIZE) -> np.ndarray:
    """Label image with an L-shape and a disk on a zero background.

    Args:
        size: Pixels per side

    Returns:
        uint8 array of shape (size, size)
    """
    image = np.zeros((size, size), dtype=np.uint8)
    unit = size // 16
    image[3 * unit:11 * unit, 2 * unit:5 * unit] = 200
    image[8 * unit:11 * unit, 5 * unit:8 * unit] = 200

    rows, cols = np.mgrid[0:size, 0:size]
    disk = (rows - 6 * unit) ** 2 + (cols - 11 * unit) ** 2 <= (3 * unit) ** 2
    image[disk] = 100
    return image


def main():
    """Write the label image and sidecar, replacing existing files."""
    output_dir = os.path.abspath(OUTPUT_DIR)
    image_path = os.path.join(output_dir, 'demo_labels.pgm')
    write_image(image_path, build_labels())
    write_json(os.path.join(output_dir, 'demo_labels.json'), {'labels': LABELS})
    print(f"Wrote {image_path}")
    for pixel, phase in LABELS.items():
        print(f"  pixel {pixel:>3} -> phase {phase}")


if __name__ == '__main__':
    main()
