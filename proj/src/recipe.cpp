#include "codi/recipe.hpp"

#include <optional>
#include <sstream>
#include <vector>

#include "codi/image_io.hpp"

namespace codi {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_real(const std::string& s, const std::string& step) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParamError("bad number '" + s + "' in recipe step '" + step + "'");
    }
}

int parse_int(const std::string& s, const std::string& step) {
    const double v = parse_real(s, step);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw ParamError("expected integer in recipe step '" + step + "'");
    return i;
}

// Working value while walking the step list: either a scalar field or a mask.
struct Working {
    std::optional<ScalarField> field;
    std::optional<BinaryMask> mask;
    bool field_is_weight = false;  // true once edge: has been applied

    bool empty() const { return !field && !mask; }
};

}  // namespace

RecipeResult eval_recipe(const RgbImage& img, const std::string& recipe) {
    std::vector<WeightPart> parts;
    std::vector<BinaryMask> mask_parts;

    Working w;
    w.field = to_grayscale(img);

    const auto commit = [&]() {
        if (w.mask) {
            mask_parts.push_back(*w.mask);
            parts.push_back(WeightPart::from(std::move(*w.mask)));
        } else if (w.field && w.field_is_weight) {
            parts.push_back(WeightPart::from(EdgeWeight::from_field(std::move(*w.field))));
        }
        // An untouched gray field is a source, not a factor; dropped.
        w = Working{};
    };

    std::string normalized = recipe;
    for (char& c : normalized) {
        if (c == ';') c = ' ';
    }
    std::istringstream steps(normalized);
    std::string step;
    while (steps >> step) {
        const auto colon = step.find(':');
        const std::string name = step.substr(0, colon);
        const std::string rest = colon == std::string::npos ? "" : step.substr(colon + 1);
        const auto args = split(rest, ',');

        if (name == "smooth") {
            if (!w.field) throw ParamError("smooth: needs a scalar field, not a mask");
            w.field = gaussian_smooth(*w.field, parse_real(args.at(0), step));
        } else if (name == "equalize") {
            if (!w.field) throw ParamError("equalize needs a scalar field, not a mask");
            w.field = equalize_histogram(*w.field);
        } else if (name == "chansub") {
            if (args.size() != 2) throw ParamError("chansub needs two channel indices");
            commit();
            w.field = channel_subtract(img, parse_int(args[0], step), parse_int(args[1], step));
        } else if (name == "edge") {
            if (!w.field) throw ParamError("edge: needs a scalar field, not a mask");
            if (args.size() < 2) throw ParamError("edge needs kind and tau");
            EdgeKind kind;
            if (args[0] == "exp") kind = EdgeKind::Exp;
            else if (args[0] == "rational") kind = EdgeKind::Rational;
            else throw ParamError("edge kind must be exp or rational");
            // Pre-smoothing comes from an explicit smooth: step.
            w.field = edge_function(*w.field, kind, parse_real(args[1], step), 0.0).g;
            w.field_is_weight = true;
        } else if (name == "thresh") {
            if (!w.field) throw ParamError("thresh: needs a scalar field, not a mask");
            if (args.size() != 2) throw ParamError("thresh needs op and value");
            CompareOp op;
            if (args[0] == "lt") op = CompareOp::Lt;
            else if (args[0] == "gt") op = CompareOp::Gt;
            else throw ParamError("thresh op must be lt or gt");
            w.mask = threshold_mask(*w.field, op, parse_real(args[1], step));
            w.field.reset();
            w.field_is_weight = false;
        } else if (name == "morph") {
            if (!w.mask) throw ParamError("morph: needs a mask; apply thresh first");
            if (args.size() != 2) throw ParamError("morph needs op and radius");
            MorphOp op;
            if (args[0] == "dilate") op = MorphOp::Dilate;
            else if (args[0] == "erode") op = MorphOp::Erode;
            else throw ParamError("morph op must be dilate or erode");
            w.mask = morphology(*w.mask, op, parse_int(args[1], step));
        } else if (name == "maskfile") {
            if (rest.empty()) throw ParamError("maskfile needs a path");
            commit();
            const RgbImage m = load_image(rest);
            w.mask = threshold_mask(to_grayscale(m), CompareOp::Gt, 0.5);
        } else {
            throw ParamError("unknown recipe step '" + name + "'");
        }
    }
    commit();

    if (parts.empty()) throw ParamError("recipe produced no weight factors");

    RecipeResult out;
    out.weight = compose_weight(parts);
    if (mask_parts.empty()) {
        out.object_mask = BinaryMask(img.width, img.height, true);
    } else {
        out.object_mask = std::move(mask_parts.front());
        for (size_t k = 1; k < mask_parts.size(); ++k) {
            for (size_t i = 0; i < out.object_mask.data.size(); ++i) {
                out.object_mask.data[i] = out.object_mask.data[i] && mask_parts[k].data[i];
            }
        }
    }
    return out;
}

}  // namespace codi
