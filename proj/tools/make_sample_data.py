#!/usr/bin/env python3
"""Regenerates the sample photos and watermark logos shipped in the repo.

Photos come from scikit-image's bundled data set (public domain / no known
restrictions); logos are rendered with Pillow using DejaVu Sans Bold.
"""
import pathlib
import numpy as np
import skimage.data
from skimage.color import rgb2gray
from PIL import Image, ImageDraw, ImageFont

ROOT = pathlib.Path(__file__).resolve().parent.parent


def write_pgm(path, img):
    img = np.clip(np.round(img), 0, 255).astype(np.uint8)
    h, w = img.shape
    path.write_bytes(b"P5\n%d %d\n255\n" % (w, h) + img.tobytes())


def write_pbm(path, bits):
    h, w = bits.shape
    lines = ["P1", "%d %d" % (w, h)]
    lines += [" ".join(str(int(b)) for b in row) for row in bits]
    path.write_text("\n".join(lines) + "\n")


def render_text(text, size, font_px):
    font = ImageFont.truetype("DejaVuSans-Bold.ttf", font_px)
    canvas = Image.new("L", size[::-1], 255)
    draw = ImageDraw.Draw(canvas)
    box = draw.textbbox((0, 0), text, font=font)
    x = (size[1] - (box[2] - box[0])) // 2 - box[0]
    y = (size[0] - (box[3] - box[1])) // 2 - box[1]
    draw.text((x, y), text, fill=0, font=font)
    return (np.asarray(canvas) < 128).astype(np.uint8)


def main():
    data = ROOT / "tests" / "data"
    data.mkdir(parents=True, exist_ok=True)
    write_pgm(data / "camera.pgm", skimage.data.camera().astype(float))
    write_pgm(data / "astronaut.pgm", rgb2gray(skimage.data.astronaut()) * 255)
    write_pgm(data / "moon.pgm", skimage.data.moon().astype(float))

    logos = ROOT / "data"
    logos.mkdir(exist_ok=True)
    small = render_text("WMARK", (19, 52), 14)
    write_pbm(logos / "logo_19x52.pbm", small)

    big = np.zeros((64, 64), np.uint8)
    yy, xx = np.mgrid[0:64, 0:64]
    r = np.hypot(yy - 31.5, xx - 31.5)
    big[(r > 27) & (r < 31)] = 1
    big |= render_text("WM", (64, 64), 26)
    write_pbm(logos / "logo_64x64.pbm", big)


if __name__ == "__main__":
    main()
