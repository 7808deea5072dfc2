import numpy as np
import pytest

from fontocr import (
    BinaryImage,
    SegmentationParams,
    ValidationError,
    remove_small_components,
    resize_binary,
    resize_to_template,
    segment_page,
    split_chars,
    split_lines,
)


def binary(height, width, ink=()) -> BinaryImage:
    bits = np.zeros((height, width), dtype=np.uint8)
    for r, c in ink:
        bits[r, c] = 1
    return BinaryImage(bits)


def flood_label_areas(bits: np.ndarray) -> list[int]:
    """Brute-force 8-connected component areas (oracle for the filter)."""
    seen = np.zeros_like(bits, dtype=bool)
    areas = []
    for r0 in range(bits.shape[0]):
        for c0 in range(bits.shape[1]):
            if not bits[r0, c0] or seen[r0, c0]:
                continue
            stack, area = [(r0, c0)], 0
            seen[r0, c0] = True
            while stack:
                r, c = stack.pop()
                area += 1
                for dr in (-1, 0, 1):
                    for dc in (-1, 0, 1):
                        rr, cc = r + dr, c + dc
                        if (
                            0 <= rr < bits.shape[0]
                            and 0 <= cc < bits.shape[1]
                            and bits[rr, cc]
                            and not seen[rr, cc]
                        ):
                            seen[rr, cc] = True
                            stack.append((rr, cc))
            areas.append(area)
    return areas


class TestRemoveSmallComponents:
    def test_isolated_pixel_erased(self):
        img = binary(10, 10, [(4, 4)])
        assert remove_small_components(img, 25).ink_count == 0

    def test_area_25_square_retained(self):
        bits = np.zeros((9, 9), dtype=np.uint8)
        bits[2:7, 2:7] = 1  # 5x5 = 25 px: not smaller than the cutoff
        img = BinaryImage(bits)
        assert remove_small_components(img, 25) == img

    def test_area_24_erased_area_30_survives(self):
        bits = np.zeros((20, 20), dtype=np.uint8)
        bits[1:5, 1:7] = 1  # 4x6 = 24
        bits[10:15, 10:16] = 1  # 5x6 = 30
        out = remove_small_components(BinaryImage(bits), 25)
        assert sorted(flood_label_areas(bits)) == [24, 30]
        assert flood_label_areas(out.bits) == [30]
        assert out.bits[12, 12] == 1 and out.bits[2, 2] == 0

    def test_diagonal_pixels_are_one_component(self):
        img = binary(10, 10, [(i, i) for i in range(6)])
        assert remove_small_components(img, 6) == img
        assert remove_small_components(img, 7).ink_count == 0

    def test_idempotent_and_never_adds_ink(self):
        rng = np.random.default_rng(31)
        img = BinaryImage(rng.random((30, 30)) < 0.3)
        once = remove_small_components(img, 5)
        assert remove_small_components(once, 5) == once
        assert (once.bits <= img.bits).all()

    def test_min_area_validated(self):
        with pytest.raises(ValidationError):
            remove_small_components(binary(2, 2), 0)


class TestSplitLines:
    def test_two_bands(self):
        bits = np.zeros((130, 20), dtype=np.uint8)
        bits[10:51, 5] = 1
        bits[80:121, 5] = 1
        assert split_lines(BinaryImage(bits), SegmentationParams()) == [(10, 50), (80, 120)]

    def test_blank_image(self):
        assert split_lines(binary(10, 10), SegmentationParams()) == []

    def test_short_gap_bridged(self):
        bits = np.zeros((70, 5), dtype=np.uint8)
        bits[10:51, 2] = 1
        bits[52:61, 2] = 1  # one blank row at 51
        params = SegmentationParams(line_gap=2)
        assert split_lines(BinaryImage(bits), params) == [(10, 60)]
        # With the default gap of 1, the single blank row splits.
        assert split_lines(BinaryImage(bits), SegmentationParams()) == [(10, 50), (52, 60)]


class TestSplitChars:
    def test_space_marker_on_wide_gap(self):
        bits = np.zeros((20, 60), dtype=np.uint8)
        bits[5:15, 2:10] = 1
        bits[5:15, 40:50] = 1  # 30 blank columns between
        line = split_chars(BinaryImage(bits), (5, 14), SegmentationParams())
        assert [(b.left, b.right) for b in line.boxes] == [(2, 9), (40, 49)]
        assert line.space_after == (True,)

    def test_single_glyph_no_markers(self):
        bits = np.zeros((10, 10), dtype=np.uint8)
        bits[2:8, 3:7] = 1
        line = split_chars(BinaryImage(bits), (2, 7), SegmentationParams())
        assert len(line.boxes) == 1
        assert line.space_after == ()

    def test_narrow_gap_is_not_a_space(self):
        bits = np.zeros((20, 30), dtype=np.uint8)
        bits[5:15, 2:10] = 1
        bits[5:15, 15:25] = 1  # 5 blank columns < space_gap 13
        line = split_chars(BinaryImage(bits), (5, 14), SegmentationParams())
        assert len(line.boxes) == 2
        assert line.space_after == (False,)

    def test_boxes_tightened_vertically(self):
        bits = np.zeros((30, 20), dtype=np.uint8)
        bits[5:25, 2:5] = 1  # tall glyph
        bits[18:25, 10:14] = 1  # short glyph on the same baseline band
        line = split_chars(BinaryImage(bits), (5, 24), SegmentationParams())
        assert [(b.top, b.bottom) for b in line.boxes] == [(5, 24), (18, 24)]


class TestSegmentationProperties:
    @staticmethod
    def random_page(rng):
        page = np.zeros((80, 120), dtype=np.uint8)
        row = 5
        while row < 60:
            col = 4
            height = int(rng.integers(6, 12))
            for _ in range(int(rng.integers(1, 6))):
                width = int(rng.integers(3, 9))
                if col + width >= 116:
                    break
                page[row : row + height, col : col + width] = 1
                col += width + int(rng.integers(2, 6))
            row += height + int(rng.integers(2, 5))
        return page

    def test_every_ink_pixel_in_exactly_one_box(self):
        rng = np.random.default_rng(41)
        params = SegmentationParams()
        for _ in range(20):
            page = BinaryImage(self.random_page(rng))
            layout = segment_page(page, params)
            covered = np.zeros_like(page.bits, dtype=int)
            for line in layout.lines:
                for box in line.boxes:
                    covered[box.top : box.bottom + 1, box.left : box.right + 1] += 1
            assert (covered[page.bits == 1] == 1).all()
            # Boxes in one line never overlap in columns.
            for line in layout.lines:
                for a, b in zip(line.boxes, line.boxes[1:]):
                    assert a.right < b.left

    def test_translation_equivariance(self):
        rng = np.random.default_rng(42)
        params = SegmentationParams()
        for _ in range(10):
            content = self.random_page(rng)
            dy, dx = int(rng.integers(0, 15)), int(rng.integers(0, 20))
            canvas = np.zeros((content.shape[0] + 20, content.shape[1] + 25), dtype=np.uint8)
            canvas[dy : dy + content.shape[0], dx : dx + content.shape[1]] = content
            base = segment_page(BinaryImage(np.pad(content, ((0, 20), (0, 25)))), params)
            moved = segment_page(BinaryImage(canvas), params)
            base_boxes = [b for line in base.lines for b in line.boxes]
            moved_boxes = [b for line in moved.lines for b in line.boxes]
            assert [b.shifted(dy, dx) for b in base_boxes] == moved_boxes


class TestResize:
    def test_identity_when_already_template_sized(self):
        rng = np.random.default_rng(51)
        img = BinaryImage(rng.integers(0, 2, (46, 26)))
        assert resize_to_template(img) == img

    def test_constant_fields_preserved(self):
        assert resize_to_template(BinaryImage(np.ones((92, 52), dtype=np.uint8))).bits.all()
        assert not resize_binary(BinaryImage(np.zeros((9, 5), dtype=np.uint8)), 46, 26).bits.any()

    def test_left_half_step_function(self):
        bits = np.zeros((92, 52), dtype=np.uint8)
        bits[:, :26] = 1
        out = resize_to_template(BinaryImage(bits))
        assert out.bits[:, :13].all()
        assert not out.bits[:, 13:].any()

    def test_output_shape(self):
        out = resize_to_template(BinaryImage(np.eye(7, dtype=np.uint8)))
        assert (out.height, out.width) == (46, 26)
