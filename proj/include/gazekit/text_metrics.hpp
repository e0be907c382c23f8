#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gazekit {

struct TokenizedText {
    std::vector<std::string> tokens;

    std::size_t size() const noexcept { return tokens.size(); }
    bool empty() const noexcept { return tokens.empty(); }
    bool operator==(const TokenizedText&) const = default;
};

/// Lowercase, whitespace split, leading/trailing ASCII punctuation stripped, empties dropped.
TokenizedText tokenize(std::string_view text);

/// Unsmoothed sentence BLEU with the closest-reference brevity penalty.
/// Returns 0 for an empty candidate.
double bleu(const TokenizedText& candidate, std::span<const TokenizedText> references, std::size_t max_n = 4);

/// LCS F-measure, F = (1 + b^2) P R / (R + b^2 P).
double rouge_l(const TokenizedText& candidate, const TokenizedText& reference, double beta = 1.2);

/// Document frequencies of n-grams (n = 1..max_n) over a corpus of reference
/// sets. Each set counts at most once per n-gram.
class CiderCorpus {
public:
    CiderCorpus(std::span<const std::vector<TokenizedText>> reference_sets, std::size_t max_n = 4);

    std::size_t size() const noexcept { return size_; }
    std::size_t max_n() const noexcept { return max_n_; }
    /// ln(|corpus| / max(1, df)).
    double idf(const std::vector<std::string>& ngram) const;

private:
    std::size_t size_;
    std::size_t max_n_;
    std::map<std::vector<std::string>, std::size_t> df_;
};

/// Base CIDEr: 10 x mean over n of the reference-averaged cosine between
/// TF-IDF n-gram vectors. No length or repetition penalty.
double cider(const TokenizedText& candidate, std::span<const TokenizedText> references, const CiderCorpus& corpus);

struct CaptionScore {
    double bleu = 0.0;
    double rouge_l = 0.0;
    double cider = 0.0;
};

struct CaptionPair {
    std::string candidate;
    std::vector<std::string> references;
};

struct CaptionRowScore {
    CaptionScore score;
    std::string error;  ///< nonempty when the row could not be scored

    bool ok() const noexcept { return error.empty(); }
};

struct CaptionScoreReport {
    std::vector<CaptionRowScore> rows;
    CaptionScore mean;     ///< over rows that scored
    std::size_t scored = 0;
};

/// Scores every pair. The corpus (reference sets, raw strings) supplies CIDEr
/// document frequencies. With `per_field`, candidate and references are parsed
/// as structured captions and each metric is the macro-average over the four
/// fields; rows that fail to parse carry the parse error instead of a score.
/// With multiple references ROUGE-L takes the best reference.
CaptionScoreReport score_captions(std::span<const CaptionPair> pairs,
                                  std::span<const std::vector<std::string>> corpus, bool per_field = false);

}  // namespace gazekit
