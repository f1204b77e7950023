#include "codi/fixtures.hpp"

#include <cmath>

namespace codi {
namespace {

void fill_rect(ScalarField& img, int row0, int row1, int col0, int col1, double v) {
    for (int i = row0; i < row1; ++i) {
        for (int j = col0; j < col1; ++j) img.at(i, j) = v;
    }
}

ScalarField ten_squares() {
    ScalarField img(127, 126, 0.0);
    const int side = 14;
    const int row_tops[2] = {25, 85};
    for (int rt : row_tops) {
        for (int k = 0; k < 5; ++k) {
            const int left = 5 + 25 * k;
            fill_rect(img, rt, rt + side, left, left + side, 255.0);
        }
    }
    return img;
}

ScalarField hexagons() {
    ScalarField img(281, 87, 0.0);
    const double radius = 17.0;
    const double cy = 43.0;
    const double s3 = std::sqrt(3.0);
    for (int k = 0; k < 6; ++k) {
        const double cx = 25.0 + 46.0 * k;
        for (int i = 0; i < img.height; ++i) {
            for (int j = 0; j < img.width; ++j) {
                const double dx = std::abs(j - cx);
                const double dy = std::abs(i - cy);
                // Flat-top regular hexagon with circumradius `radius`.
                if (dx <= radius && dy <= s3 / 2.0 * radius && s3 * dx + dy <= s3 * radius) {
                    img.at(i, j) = 255.0;
                }
            }
        }
    }
    return img;
}

ScalarField three_cells() {
    ScalarField img(150, 60, 0.0);
    fill_rect(img, 5, 55, 5, 145, 255.0);
    // Two interior walls, each with an open passage in the middle.
    for (int wall_col : {50, 96}) {
        fill_rect(img, 5, 25, wall_col, wall_col + 3, 0.0);
        fill_rect(img, 35, 55, wall_col, wall_col + 3, 0.0);
    }
    return img;
}

ScalarField object_grid() {
    ScalarField img(492, 252, 0.0);
    const int side = 12, pitch = 24;
    for (int r = 0; r < 10; ++r) {
        for (int c = 0; c < 20; ++c) {
            const int top = 12 + pitch * r;
            const int left = 12 + pitch * c;
            fill_rect(img, top, top + side, left, left + side, 255.0);
        }
    }
    return img;
}

}  // namespace

ScalarField two_squares_fixture(int opening_height, int wall_thickness) {
    if (opening_height < 1 || wall_thickness < 1) {
        throw ParamError("two-squares fixture needs positive gap dimensions");
    }
    const int width = 91, height = 47, margin = 3;
    const int side = (width - 2 * margin - wall_thickness) / 2;
    if (side < 4 || side > height - 2 * margin || opening_height > side - 2) {
        throw ParamError("two-squares fixture gap does not fit");
    }
    ScalarField img(width, height, 0.0);
    const int row0 = (height - side) / 2;
    fill_rect(img, row0, row0 + side, margin, margin + side, 255.0);
    const int right0 = margin + side + wall_thickness;
    fill_rect(img, row0, row0 + side, right0, right0 + side, 255.0);
    // Open passage through the wall.
    const int open0 = row0 + (side - opening_height) / 2;
    fill_rect(img, open0, open0 + opening_height, margin + side, right0, 255.0);
    return img;
}

ScalarField gen_fixture(const std::string& name) {
    if (name == "two-squares-a") return two_squares_fixture(9, 15);
    if (name == "two-squares-b") return two_squares_fixture(9, 3);
    if (name == "two-squares-c") return two_squares_fixture(21, 3);
    if (name == "ten-squares") return ten_squares();
    if (name == "hexagons") return hexagons();
    if (name == "three-cells") return three_cells();
    if (name == "object-grid") return object_grid();
    throw ParamError("unknown fixture '" + name + "'");
}

}  // namespace codi
