#include "mograph/align.hpp"

#include "mograph/error.hpp"

#include <cctype>
#include <sstream>

namespace mograph {

namespace {

char fold_char(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

/// Case-folds and keeps only alphanumeric characters; everything else —
/// punctuation, word separators, apostrophes — matches nothing.
std::string normalize(const std::string& token) {
    std::string out;
    for (char c : token)
        if (std::isalnum(static_cast<unsigned char>(c))) out.push_back(fold_char(c));
    return out;
}

std::string strip_continuation(const std::string& word) {
    if (word.rfind("##", 0) == 0) return word.substr(2);
    return word;
}

}  // namespace

void FrameWordAlignment::validate() const {
    if (word_index.size() != filled.size())
        throw ValidationError("alignment index and filled tracks differ in length");
    int previous = -1;
    for (std::size_t i = 0; i < word_index.size(); ++i) {
        if (word_index[i] < -1)
            throw ValidationError("alignment contains a word index below -1");
        if (word_index[i] >= 0) {
            if (previous >= 0 && word_index[i] < previous)
                throw ValidationError("alignment word indices must be non-decreasing");
            previous = word_index[i];
        }
    }
}

FrameWordAlignment align_tokens(const FrameTokenSequence& frames,
                                const WordTokenSequence& words,
                                const AlignConfig& config) {
    if (frames.tokens.empty()) throw ValidationError("frame token sequence is empty");

    // Character stream of the matchable words, each character tagged with the
    // index of the word it came from.
    std::string stream;
    std::vector<int> owner;
    for (std::size_t w = 0; w < words.words.size(); ++w) {
        if (words.special_markers.count(words.words[w])) continue;
        const std::string chars = normalize(strip_continuation(words.words[w]));
        stream += chars;
        owner.insert(owner.end(), chars.size(), static_cast<int>(w));
    }

    FrameWordAlignment result;
    result.word_index.assign(frames.tokens.size(), -1);
    result.filled.assign(frames.tokens.size(), false);

    std::size_t cursor = 0;
    std::string run;  // normalized character of the current emission run
    bool matched_any = false;
    for (std::size_t f = 0; f < frames.tokens.size(); ++f) {
        const std::string c = normalize(frames.tokens[f]);
        if (c.size() > 1) {
            std::ostringstream msg;
            msg << "frame " << f << " token '" << frames.tokens[f]
                << "' is not a single character";
            throw ValidationError(msg.str());
        }
        if (c.empty()) {  // blank: ends any run
            run.clear();
            continue;
        }
        if (c != run) {  // new emission: consume the next matching word character
            run = c;
            while (cursor < stream.size() && stream[cursor] != c[0]) ++cursor;
            if (cursor == stream.size()) {
                std::ostringstream msg;
                msg << "frame " << f << " character '" << c
                    << "' has no remaining match in the word sequence";
                throw ComputeError(msg.str());
            }
            ++cursor;  // repeated emissions of this run reuse the same match
        }
        result.word_index[f] = owner[cursor - 1];
        matched_any = true;
    }

    if (!matched_any && !config.allow_unmatched)
        throw ValidationError("no non-blank frame tokens to align");
    return result;
}

FrameWordAlignment fill_gaps(const FrameWordAlignment& alignment) {
    alignment.validate();
    const std::size_t n = alignment.word_index.size();

    bool any_assigned = false;
    for (int idx : alignment.word_index) any_assigned |= idx >= 0;
    if (!any_assigned) throw ValidationError("cannot fill gaps with zero assigned frames");

    // Distance to the closest assigned frame on each side; ties go left.
    std::vector<long> prev_at(n, -1), next_at(n, -1);
    long last = -1;
    for (std::size_t i = 0; i < n; ++i) {
        if (alignment.word_index[i] >= 0) last = static_cast<long>(i);
        prev_at[i] = last;
    }
    last = -1;
    for (std::size_t i = n; i-- > 0;) {
        if (alignment.word_index[i] >= 0) last = static_cast<long>(i);
        next_at[i] = last;
    }

    FrameWordAlignment result = alignment;
    for (std::size_t i = 0; i < n; ++i) {
        if (alignment.word_index[i] >= 0) continue;
        long source;
        if (prev_at[i] < 0) {
            source = next_at[i];
        } else if (next_at[i] < 0) {
            source = prev_at[i];
        } else {
            const long d_prev = static_cast<long>(i) - prev_at[i];
            const long d_next = next_at[i] - static_cast<long>(i);
            source = d_prev <= d_next ? prev_at[i] : next_at[i];
        }
        result.word_index[i] = alignment.word_index[source];
        result.filled[i] = true;
    }
    return result;
}

const std::set<std::string>& default_special_markers() {
    static const std::set<std::string> markers = {"CLS",   "POS",   "SEP",   "PAD",
                                                  "[CLS]", "[SEP]", "[PAD]", "[UNK]",
                                                  "<s>",   "</s>",  "<pad>"};
    return markers;
}

}  // namespace mograph
