#include "fixture.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace fixture {

namespace {

using speechgen::SpeechClass;

const std::array<std::vector<std::string>, 4> kClassTopics = {{
    {"tax relief", "border security", "national defense", "energy policy", "small businesses"},
    {"federal spending", "property rights", "trade deficit", "government regulation"},
    {"student loans", "clean water", "public health", "veterans benefits"},
    {"middle class", "health care", "minimum wage", "social security", "republican budget"},
}};
const std::vector<std::string> kSharedTopics = {"american people", "federal government", "united states"};
const std::vector<std::string> kStates = {"texas", "ohio", "california", "new york", "florida", "georgia"};

const std::vector<std::string> kBody = {
    "the {T} of this nation is at stake .",
    "we must protect {T} for every american family .",
    "this bill {V} {T} and {T2} .",
    "our constituents care deeply about {T} .",
    "the american people deserve real {T} .",
    "let me be clear about {T} .",
    "how can we ignore {T} ?",
    "the gentleman from {ST} raised the issue of {T} !",
    "i urge my colleagues to {VOTE} this rule .",
    "for too long , {T} has been neglected by this congress .",
    "we have heard a great deal about {T} today .",
    "in my district , families talk about {T} every day .",
};

struct Gen {
  std::mt19937_64 rng;
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }
};

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

std::string topic(Gen& g, std::size_t cls) {
  if (g.chance(0.25)) return kSharedTopics[g.pick(kSharedTopics.size())];
  const auto& own = kClassTopics[cls];
  return own[g.pick(own.size())];
}

std::string speech_text(Gen& g, std::size_t cls, int body) {
  const bool yea = cls == 0 || cls == 2;
  std::ostringstream os;
  if (g.chance(0.7)) {
    os << (g.chance(0.3) ? "Mr. Speaker" : "mr. speaker") << " , i rise in strong "
       << (yea ? "support of" : "opposition to") << " this bill . ";
  } else {
    os << "madam speaker , i thank the gentleman for yielding . ";
  }
  for (int i = 0; i < body; ++i) {
    std::string s = kBody[g.pick(kBody.size())];
    replace_all(s, "{T2}", topic(g, cls));
    replace_all(s, "{T}", topic(g, cls));
    replace_all(s, "{V}", yea ? "strengthens" : "undermines");
    replace_all(s, "{VOTE}", yea ? "support" : "oppose");
    replace_all(s, "{ST}", kStates[g.pick(kStates.size())]);
    if (g.chance(0.05)) replace_all(s, " .", " . .");  // doubled delimiter
    if (g.chance(0.05)) s = "<p>" + s + "</p>";
    os << s << ' ';
  }
  switch (g.pick(3)) {
    case 0: os << "i yield back the balance of my time ."; break;
    case 1: os << "i reserve the balance of my time ."; break;
    default: os << "i urge a " << (yea ? "yes" : "no") << " vote ."; break;
  }
  return os.str();
}

std::string file_name(std::size_t cls, int n) {
  const SpeechClass c = SpeechClass::from_index(cls);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%03d_%06d_%07d_%c%c%c.txt", 100 + n % 7, 400000 + n, 1000000 + 37 * n,
                c.code()[0], n % 3 == 0 ? 'M' : 'O', c.code()[1]);
  return buf;
}

}  // namespace

std::vector<FixtureFile> make_files(const FixtureShape& shape) {
  Gen g{std::mt19937_64(shape.seed)};
  std::vector<FixtureFile> out;
  std::set<std::string> seen;
  int serial = 0;
  for (std::size_t cls = 0; cls < 4; ++cls) {
    for (int k = 0; k < shape.speeches[cls]; ++k) {
      std::string text;
      do {
        const int body = shape.min_body + static_cast<int>(g.pick(static_cast<std::size_t>(shape.max_body - shape.min_body + 1)));
        text = speech_text(g, cls, body);
      } while (!seen.insert(text).second);
      out.push_back({file_name(cls, serial++), text});
    }
    if (shape.add_single_sentence) out.push_back({file_name(cls, serial++), "mr. speaker , i yield back ."});
  }
  if (shape.add_unlabeled) out.push_back({"notes.txt", "these are not a speech . nothing to see ."});
  return out;
}

void write_dir(const fs::path& dir, const FixtureShape& shape) {
  fs::create_directories(dir);
  for (const auto& f : make_files(shape)) {
    std::ofstream(dir / f.name) << f.text << '\n';
  }
}

speechgen::Corpus make_corpus(const FixtureShape& shape) {
  std::vector<speechgen::TokenizedSpeech> kept;
  for (const auto& f : make_files(shape)) {
    if (f.name == "notes.txt") continue;
    const char p = f.name[f.name.size() - 7], v = f.name[f.name.size() - 5];
    const auto cls = SpeechClass::parse(std::string{p, v});
    const std::string id = f.name.substr(0, f.name.size() - 4);
    if (auto s = speechgen::preprocess({id, *cls, f.text})) kept.push_back(std::move(*s));
  }
  return speechgen::Corpus::build(std::move(kept));
}

const speechgen::LexiconTagger& bundled_tagger() {
  static const speechgen::LexiconTagger tagger(speechgen::load_lexicon_dir(SPEECHGEN_TEST_LEXICON_DIR));
  return tagger;
}

TempDir::TempDir() {
  static int counter = 0;
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("speechgen_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

speechgen::TokenizedSpeech speech(const std::string& id, const std::string& cls, const std::string& text) {
  speechgen::Markers mk;
  std::vector<std::string> tokens{mk.start};
  std::istringstream in(text);
  std::string w;
  while (in >> w) tokens.push_back(w == "." ? mk.stop : w);
  tokens.push_back(mk.end);
  return speechgen::make_speech(id, *SpeechClass::parse(cls), std::move(tokens));
}

std::vector<oracle::Speech> to_oracle(const speechgen::Corpus& corpus, const speechgen::TaggedCorpus& tagged) {
  std::vector<oracle::Speech> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& s = corpus.speeches()[i];
    oracle::Speech o;
    o.cls = s.cls.code();
    o.tokens = s.tokens;
    for (const auto& ts : tagged.sentences(i)) {
      o.sentence_words.push_back(ts.tokens);
      std::vector<std::string> names;
      for (auto t : ts.tags) names.emplace_back(speechgen::tag_name(t));
      o.sentence_tags.push_back(std::move(names));
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace fixture
