#pragma once

#include <string_view>
#include <vector>

#include "cohort/corpus/types.hpp"

namespace cohort {

/// Reads the supported CHAT subset:
///   - `@` header lines and `%` dependent tiers are skipped,
///   - `*SPK:` speaker tiers are read; only `*PAR:` content is kept,
///   - tab-indented lines continue the previous tier,
///   - `&uh`, `&=laughs`, `xxx`, `0word` and `[...]` codes become non-word tokens,
///   - `. ? !` and `+...`-style terminators close an utterance.
/// Words are lowercased. The returned Sample carries only utterances; identity
/// and diagnosis fields are left for the caller.
///
/// Throws ParseError (with line number) on an unknown line prefix and DataError
/// when the participant produced no tokens.
Sample parse_chat(std::string_view text);

/// One utterance per non-blank line, same tokenizer as parse_chat.
Sample parse_plain_transcript(std::string_view text);

/// Tokenizes one tier's content into utterances (split at terminators).
std::vector<Utterance> tokenize_tier(std::string_view content);

}  // namespace cohort
