#include "gazekit/text_metrics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <set>

#include "gazekit/caption.hpp"
#include "gazekit/error.hpp"

namespace gazekit {

namespace {

using NGram = std::vector<std::string>;
using NGramCounts = std::map<NGram, std::size_t>;

NGramCounts count_ngrams(const TokenizedText& text, std::size_t n) {
    NGramCounts counts;
    if (text.size() < n) return counts;
    for (std::size_t i = 0; i + n <= text.size(); ++i) {
        ++counts[NGram(text.tokens.begin() + static_cast<std::ptrdiff_t>(i),
                       text.tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
    }
    return counts;
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

CaptionScore score_one(const TokenizedText& cand, const std::vector<TokenizedText>& refs, const CiderCorpus& corpus) {
    CaptionScore s;
    s.bleu = bleu(cand, refs);
    for (const auto& r : refs) s.rouge_l = std::max(s.rouge_l, rouge_l(cand, r));
    s.cider = cider(cand, refs, corpus);
    return s;
}

std::vector<TokenizedText> tokenize_all(const std::vector<std::string>& texts) {
    std::vector<TokenizedText> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(tokenize(t));
    return out;
}

}  // namespace

TokenizedText tokenize(std::string_view text) {
    TokenizedText out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        std::size_t a = i, b = j;
        while (a < b && std::ispunct(static_cast<unsigned char>(text[a]))) ++a;
        while (b > a && std::ispunct(static_cast<unsigned char>(text[b - 1]))) --b;
        if (b > a) {
            std::string tok(text.substr(a, b - a));
            std::transform(tok.begin(), tok.end(), tok.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            out.tokens.push_back(std::move(tok));
        }
        i = j;
    }
    return out;
}

double bleu(const TokenizedText& candidate, std::span<const TokenizedText> references, std::size_t max_n) {
    if (references.empty()) throw Error(ErrorCode::InvalidArgument, "BLEU needs at least one reference");
    if (max_n == 0) throw Error(ErrorCode::InvalidArgument, "max_n must be positive");
    if (candidate.empty()) return 0.0;

    double log_precision = 0.0;
    for (std::size_t n = 1; n <= max_n; ++n) {
        const auto cand_counts = count_ngrams(candidate, n);
        NGramCounts max_ref;
        for (const auto& ref : references) {
            for (const auto& [g, c] : count_ngrams(ref, n)) max_ref[g] = std::max(max_ref[g], c);
        }
        std::size_t clipped = 0, total = 0;
        for (const auto& [g, c] : cand_counts) {
            total += c;
            const auto it = max_ref.find(g);
            if (it != max_ref.end()) clipped += std::min(c, it->second);
        }
        if (clipped == 0) return 0.0;
        log_precision += std::log(static_cast<double>(clipped) / static_cast<double>(total));
    }

    // Closest reference length; the shorter one on ties.
    const auto c = static_cast<double>(candidate.size());
    double r = static_cast<double>(references.front().size());
    for (const auto& ref : references) {
        const auto len = static_cast<double>(ref.size());
        if (std::abs(len - c) < std::abs(r - c) || (std::abs(len - c) == std::abs(r - c) && len < r)) r = len;
    }
    const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
    return bp * std::exp(log_precision / static_cast<double>(max_n));
}

double rouge_l(const TokenizedText& candidate, const TokenizedText& reference, double beta) {
    if (candidate.empty() || reference.empty()) return 0.0;
    const auto lcs = static_cast<double>(lcs_length(candidate.tokens, reference.tokens));
    if (lcs == 0.0) return 0.0;
    const double p = lcs / static_cast<double>(candidate.size());
    const double r = lcs / static_cast<double>(reference.size());
    const double b2 = beta * beta;
    return (1.0 + b2) * p * r / (r + b2 * p);
}

CiderCorpus::CiderCorpus(std::span<const std::vector<TokenizedText>> reference_sets, std::size_t max_n)
    : size_(reference_sets.size()), max_n_(max_n) {
    if (reference_sets.empty()) throw Error(ErrorCode::EmptyCorpus, "CIDEr needs a nonempty reference corpus");
    if (max_n == 0) throw Error(ErrorCode::InvalidArgument, "max_n must be positive");
    for (const auto& set : reference_sets) {
        std::set<NGram> seen;
        for (const auto& ref : set) {
            for (std::size_t n = 1; n <= max_n_; ++n) {
                for (const auto& [g, c] : count_ngrams(ref, n)) seen.insert(g);
            }
        }
        for (const auto& g : seen) ++df_[g];
    }
}

double CiderCorpus::idf(const std::vector<std::string>& ngram) const {
    const auto it = df_.find(ngram);
    const double df = it == df_.end() ? 1.0 : static_cast<double>(std::max<std::size_t>(1, it->second));
    return std::log(static_cast<double>(size_) / df);
}

double cider(const TokenizedText& candidate, std::span<const TokenizedText> references, const CiderCorpus& corpus) {
    if (references.empty()) throw Error(ErrorCode::InvalidArgument, "CIDEr needs at least one reference");
    const auto weighted = [&](const NGramCounts& counts) {
        std::map<NGram, double> v;
        for (const auto& [g, c] : counts) v[g] = static_cast<double>(c) * corpus.idf(g);
        return v;
    };
    const auto norm = [](const std::map<NGram, double>& v) {
        double s = 0.0;
        for (const auto& [g, x] : v) s += x * x;
        return std::sqrt(s);
    };

    double total = 0.0;
    for (std::size_t n = 1; n <= corpus.max_n(); ++n) {
        const auto cv = weighted(count_ngrams(candidate, n));
        const double cn = norm(cv);
        double per_ref = 0.0;
        for (const auto& ref : references) {
            const auto rv = weighted(count_ngrams(ref, n));
            const double rn = norm(rv);
            if (cn == 0.0 || rn == 0.0) continue;
            double dot = 0.0;
            for (const auto& [g, x] : cv) {
                const auto it = rv.find(g);
                if (it != rv.end()) dot += x * it->second;
            }
            per_ref += dot / (cn * rn);
        }
        total += per_ref / static_cast<double>(references.size());
    }
    return 10.0 * total / static_cast<double>(corpus.max_n());
}

CaptionScoreReport score_captions(std::span<const CaptionPair> pairs, std::span<const std::vector<std::string>> corpus,
                                  bool per_field) {
    CaptionScoreReport report;
    if (pairs.empty()) return report;

    if (!per_field) {
        std::vector<std::vector<TokenizedText>> sets;
        for (const auto& set : corpus) sets.push_back(tokenize_all(set));
        const CiderCorpus idf(sets);
        for (const auto& p : pairs) {
            CaptionRowScore row;
            if (p.references.empty()) {
                row.error = "NoReferences";
            } else {
                row.score = score_one(tokenize(p.candidate), tokenize_all(p.references), idf);
            }
            report.rows.push_back(std::move(row));
        }
    } else {
        // One document-frequency table per field, built from the parseable corpus captions.
        std::array<std::vector<std::vector<TokenizedText>>, 4> field_sets;
        for (const auto& set : corpus) {
            std::array<std::vector<TokenizedText>, 4> parsed;
            for (const auto& text : set) {
                try {
                    const auto c = parse_caption(text);
                    for (auto f : kCaptionFields) parsed[static_cast<std::size_t>(f)].push_back(tokenize(c.field(f)));
                } catch (const CaptionError&) {
                }
            }
            if (parsed[0].empty()) continue;
            for (std::size_t f = 0; f < 4; ++f) field_sets[f].push_back(std::move(parsed[f]));
        }
        std::vector<CiderCorpus> idfs;
        for (const auto& sets : field_sets) idfs.emplace_back(sets);

        for (const auto& p : pairs) {
            CaptionRowScore row;
            try {
                if (p.references.empty()) throw Error(ErrorCode::InvalidArgument, "no references");
                const auto cand = parse_caption(p.candidate);
                std::vector<StructuredCaption> refs;
                for (const auto& r : p.references) refs.push_back(parse_caption(r));
                for (auto f : kCaptionFields) {
                    std::vector<TokenizedText> ref_tokens;
                    for (const auto& r : refs) ref_tokens.push_back(tokenize(r.field(f)));
                    const auto s = score_one(tokenize(cand.field(f)), ref_tokens, idfs[static_cast<std::size_t>(f)]);
                    row.score.bleu += s.bleu / 4.0;
                    row.score.rouge_l += s.rouge_l / 4.0;
                    row.score.cider += s.cider / 4.0;
                }
            } catch (const CaptionError& e) {
                row = CaptionRowScore{};
                row.error = e.summary();
            } catch (const Error& e) {
                row = CaptionRowScore{};
                row.error = std::string(error_name(e.code()));
            }
            report.rows.push_back(std::move(row));
        }
    }

    for (const auto& row : report.rows) {
        if (!row.ok()) continue;
        report.mean.bleu += row.score.bleu;
        report.mean.rouge_l += row.score.rouge_l;
        report.mean.cider += row.score.cider;
        ++report.scored;
    }
    if (report.scored > 0) {
        const auto n = static_cast<double>(report.scored);
        report.mean.bleu /= n;
        report.mean.rouge_l /= n;
        report.mean.cider /= n;
    }
    return report;
}

}  // namespace gazekit
