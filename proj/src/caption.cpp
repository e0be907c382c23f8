#include "gazekit/caption.hpp"

#include <algorithm>
#include <cctype>

namespace gazekit {

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::optional<CaptionField> field_from_label(std::string_view label) {
    const auto l = lower(trim(label));
    for (auto f : kCaptionFields) {
        if (l == lower(field_label(f))) return f;
    }
    return std::nullopt;
}

std::string lower_label(CaptionField f) { return lower(field_label(f)); }

}  // namespace

std::string_view field_label(CaptionField field) noexcept {
    switch (field) {
        case CaptionField::Scene: return "Scene";
        case CaptionField::Current: return "Current";
        case CaptionField::Next: return "Next";
        case CaptionField::Why: return "Why";
    }
    return "";
}

CaptionError::CaptionError(ErrorCode code, CaptionField field, const std::string& detail)
    : Error(code, lower_label(field) + ": " + detail), field_(field) {}

std::string CaptionError::summary() const {
    return std::string(error_name(code())) + "(" + lower_label(field_) + ")";
}

StructuredCaption::StructuredCaption(std::string scene, std::string current, std::string next, std::string why)
    : fields_{std::move(scene), std::move(current), std::move(next), std::move(why)} {
    for (auto f : kCaptionFields) {
        auto& value = fields_[static_cast<std::size_t>(f)];
        if (value.find_first_of("|\r\n") != std::string::npos) {
            throw CaptionError(ErrorCode::InvalidCharacter, f, "fields may not contain '|' or line breaks");
        }
        value = std::string(trim(value));
        if (value.empty()) throw CaptionError(ErrorCode::EmptyField, f, "field is empty");
    }
}

StructuredCaption parse_caption(std::string_view text) {
    if (const auto nl = text.find_first_of("\r\n"); nl != std::string_view::npos && !trim(text.substr(nl)).empty()) {
        throw CaptionError(ErrorCode::InvalidCharacter, CaptionField::Scene, "caption spans multiple lines");
    }
    text = trim(text);

    struct Segment {
        std::optional<CaptionField> field;
        std::string_view value;
    };
    std::vector<Segment> segments;
    std::size_t start = 0;
    while (true) {
        const auto bar = text.find('|', start);
        const auto piece = text.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
        const auto colon = piece.find(':');
        if (colon == std::string_view::npos) {
            segments.push_back({std::nullopt, piece});
        } else {
            segments.push_back({field_from_label(piece.substr(0, colon)), piece.substr(colon + 1)});
        }
        if (bar == std::string_view::npos) break;
        start = bar + 1;
    }

    std::array<std::optional<std::string_view>, 4> found;
    std::vector<CaptionField> order;
    for (const auto& seg : segments) {
        if (!seg.field) {
            if (trim(seg.value).empty() && segments.size() == 1) break;  // blank input
            const auto expected = order.empty() ? CaptionField::Scene : order.back();
            throw CaptionError(ErrorCode::UnexpectedSegment, expected,
                               "segment '" + std::string(trim(seg.value)) + "' has no known label");
        }
        auto& slot = found[static_cast<std::size_t>(*seg.field)];
        if (slot) throw CaptionError(ErrorCode::OrderViolation, *seg.field, "label repeated");
        slot = seg.value;
        order.push_back(*seg.field);
    }
    for (auto f : kCaptionFields) {
        if (!found[static_cast<std::size_t>(f)]) throw CaptionError(ErrorCode::MissingField, f, "label absent");
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i] != kCaptionFields[i]) {
            throw CaptionError(ErrorCode::OrderViolation, order[i], "labels must appear as Scene, Current, Next, Why");
        }
    }
    return StructuredCaption(std::string(*found[0]), std::string(*found[1]), std::string(*found[2]),
                             std::string(*found[3]));
}

std::string serialize_caption(const StructuredCaption& caption) {
    std::string out;
    for (auto f : kCaptionFields) {
        if (f != CaptionField::Scene) out += " | ";
        out += field_label(f);
        out += ": ";
        out += caption.field(f);
    }
    return out;
}

CaptionValidationReport validate_manifest_captions(std::span<const std::string> captions) {
    CaptionValidationReport report;
    for (std::size_t i = 0; i < captions.size(); ++i) {
        CaptionRowStatus status;
        status.row = i;
        try {
            (void)parse_caption(captions[i]);
            status.valid = true;
            ++report.valid;
        } catch (const CaptionError& e) {
            status.error = e.summary();
            ++report.invalid;
        }
        report.rows.push_back(std::move(status));
    }
    return report;
}

}  // namespace gazekit
