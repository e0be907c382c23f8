#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gazekit/error.hpp"

namespace gazekit {

enum class CaptionField { Scene = 0, Current = 1, Next = 2, Why = 3 };

inline constexpr std::array<CaptionField, 4> kCaptionFields = {CaptionField::Scene, CaptionField::Current,
                                                               CaptionField::Next, CaptionField::Why};

/// Canonical label, e.g. "Scene".
std::string_view field_label(CaptionField field) noexcept;

/// A parse or construction failure tied to one caption field.
class CaptionError : public Error {
public:
    CaptionError(ErrorCode code, CaptionField field, const std::string& detail);

    CaptionField field() const noexcept { return field_; }
    /// e.g. "MissingField(next)"
    std::string summary() const;

private:
    CaptionField field_;
};

/// Scene context, current focus, anticipated shift and its rationale.
/// Fields are trimmed, nonempty, and contain neither '|' nor line breaks.
class StructuredCaption {
public:
    StructuredCaption(std::string scene, std::string current, std::string next, std::string why);

    const std::string& scene() const noexcept { return fields_[0]; }
    const std::string& current() const noexcept { return fields_[1]; }
    const std::string& next() const noexcept { return fields_[2]; }
    const std::string& why() const noexcept { return fields_[3]; }
    const std::string& field(CaptionField f) const noexcept { return fields_[static_cast<std::size_t>(f)]; }

    bool operator==(const StructuredCaption&) const = default;

private:
    std::array<std::string, 4> fields_;
};

/// Accepts "Scene: ... | Current: ... | Next: ... | Why: ..." with
/// case-insensitive labels in that order. Throws CaptionError.
StructuredCaption parse_caption(std::string_view text);

/// "Scene: a | Current: b | Next: c | Why: d"
std::string serialize_caption(const StructuredCaption& caption);

struct CaptionRowStatus {
    std::size_t row = 0;
    bool valid = false;
    std::string error;  ///< empty when valid, otherwise e.g. "MissingField(next)"
};

struct CaptionValidationReport {
    std::vector<CaptionRowStatus> rows;
    std::size_t valid = 0;
    std::size_t invalid = 0;

    std::size_t total() const noexcept { return rows.size(); }
};

CaptionValidationReport validate_manifest_captions(std::span<const std::string> captions);

}  // namespace gazekit
