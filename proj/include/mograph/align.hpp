#pragma once

#include <set>
#include <string>
#include <vector>

namespace mograph {

/// Per-frame acoustic token emissions. Tokens are single characters; an empty
/// string (or one that normalizes to empty, e.g. punctuation) is a blank.
/// Consecutive identical non-blank tokens count as one emission, blanks break
/// runs — the usual reading of a CTC output lattice.
struct FrameTokenSequence {
    std::vector<std::string> tokens;
    double frame_rate = 30.0;
};

/// Word-level tokens in transcript order, possibly wrapped in special markers
/// (sequence start/end, padding) that carry no characters to match.
struct WordTokenSequence {
    std::vector<std::string> words;
    std::set<std::string> special_markers;
};

/// Per-frame index into WordTokenSequence::words; -1 marks frames not assigned
/// yet. `filled` flags frames whose index came from gap filling rather than a
/// direct character match.
struct FrameWordAlignment {
    std::vector<int> word_index;
    std::vector<bool> filled;

    void validate() const;
};

struct AlignConfig {
    /// With no non-blank frame at all: true returns an all -1 alignment,
    /// false treats the input as an error.
    bool allow_unmatched = false;
};

/// Greedy left-to-right character matching: the de-duplicated non-blank frame
/// characters are scanned onto the concatenation of the non-special words
/// (case-folded, punctuation and subword continuation markers stripped), and
/// each matched frame receives the owning word's index. Blanks stay -1.
FrameWordAlignment align_tokens(const FrameTokenSequence& frames,
                                const WordTokenSequence& words,
                                const AlignConfig& config = {});

/// Replaces every -1 with the word index of the nearest assigned frame,
/// breaking exact distance ties toward the earlier frame. Idempotent.
FrameWordAlignment fill_gaps(const FrameWordAlignment& alignment);

/// Marker set used by the command-line frontend when none is declared.
const std::set<std::string>& default_special_markers();

}  // namespace mograph
