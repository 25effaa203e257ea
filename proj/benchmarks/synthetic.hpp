#pragma once

#include <speechgen/corpus.hpp>
#include <speechgen/postag.hpp>

namespace bench {

// Random speeches over a small political vocabulary, `per_class` per class.
speechgen::Corpus synthetic_corpus(std::size_t per_class, std::uint64_t seed = 1);

const speechgen::LexiconTagger& tagger();

}  // namespace bench
