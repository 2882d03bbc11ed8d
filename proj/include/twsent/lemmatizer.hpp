#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace twsent {

// Rule-based English lemmatizer: suffix rules for plural nouns and
// -s/-ed/-ing verb inflections, plus an exception table for irregular
// forms and for words the suffix rules would mangle. Tokens containing
// an apostrophe or a digit pass through unchanged, so contractions like
// "hasn't" and the 0/1/2 sentinels keep their surface form.
class Lemmatizer {
 public:
  Lemmatizer() { load_table(builtin_table()); }

  // form<TAB>lemma, one pair per line, '#' comments. Entries override the
  // built-in table.
  void load_exceptions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("lemmatizer: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    load_table(ss.str());
  }

  std::string lemma(const std::string& token) const {
    for (char c : token)
      if (c == '\'' || (c >= '0' && c <= '9')) return token;
    auto it = exceptions_.find(token);
    if (it != exceptions_.end()) return it->second;
    if (token.size() <= 3) return token;

    const std::size_t n = token.size();
    // -ies -> -y  (cities -> city)
    if (n >= 5 && ends_with(token, "ies")) return token.substr(0, n - 3) + "y";
    // -ied -> -y  (tried -> try)
    if (n >= 5 && ends_with(token, "ied")) return token.substr(0, n - 3) + "y";
    // -eed -> -ee (agreed -> agree)
    if (n >= 5 && ends_with(token, "eed")) return token.substr(0, n - 1);
    // -es after a sibilant  (boxes -> box, watches -> watch). The endings
    // are spelled out so that horse+s and size+s fall through to the -s
    // rule instead.
    if (n >= 5 && (ends_with(token, "sses") || ends_with(token, "zzes") ||
                   ends_with(token, "xes") || ends_with(token, "ches") ||
                   ends_with(token, "shes")))
      return token.substr(0, n - 2);
    // -ed / -ing with stem repair  (stopped -> stop, making -> make)
    if (n >= 5 && ends_with(token, "ed")) {
      std::string stem = token.substr(0, n - 2);
      if (has_vowel(stem)) return repair(stem);
    }
    if (n >= 6 && ends_with(token, "ing")) {
      std::string stem = token.substr(0, n - 3);
      if (has_vowel(stem)) return repair(stem);
    }
    // plural / third-person -s  (cats -> cat, wants -> want)
    if (n >= 4 && token.back() == 's' && !ends_with(token, "ss") && !ends_with(token, "us") &&
        !ends_with(token, "is"))
      return token.substr(0, n - 1);
    return token;
  }

 private:
  static bool ends_with(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
  }
  static bool is_vowel(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
  }
  static bool has_vowel(const std::string& s) {
    for (char c : s)
      if (is_vowel(c)) return true;
    return false;
  }
  // Vowel-consonant alternation count, the measure of Porter's stemmer.
  static int measure(const std::string& s) {
    int m = 0;
    bool in_vowel = false;
    for (char c : s) {
      const bool v = is_vowel(c);
      if (!v && in_vowel) ++m;
      in_vowel = v;
    }
    return m;
  }

  // After stripping -ed/-ing: undouble a final doubled consonant (except
  // l, s, z). A silent e comes back after a final c, v or z (danc ->
  // dance, lov -> love, amaz -> amaze; English spelling bans those bare
  // endings) and after a short c-v-c stem (hop -> hope but visit stays,
  // hence the measure == 1 condition).
  static std::string repair(std::string stem) {
    const std::size_t n = stem.size();
    if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) && stem[n - 1] != 'l' &&
        stem[n - 1] != 's' && stem[n - 1] != 'z')
      return stem.substr(0, n - 1);
    const char last = stem[n - 1];
    if (last == 'c' || last == 'v' || last == 'z') return stem + "e";
    if (n >= 3) {
      char a = stem[n - 3], b = stem[n - 2];
      if (!is_vowel(a) && is_vowel(b) && !is_vowel(last) && last != 'w' && last != 'x' &&
          last != 'y' && measure(stem) == 1)
        return stem + "e";
    }
    return stem;
  }

  void load_table(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::size_t tab = line.find('\t');
      if (tab == std::string::npos) continue;
      std::string form = line.substr(0, tab);
      std::string lem = line.substr(tab + 1);
      if (!lem.empty() && lem.back() == '\r') lem.pop_back();
      if (!form.empty() && !lem.empty()) exceptions_[form] = lem;
    }
  }

  static const char* builtin_table() {
    return
        // irregular plurals
        "men\tman\nwomen\twoman\nchildren\tchild\nfeet\tfoot\nteeth\ttooth\n"
        "mice\tmouse\ngeese\tgoose\nlives\tlife\nwives\twife\nknives\tknife\n"
        "leaves\tleaf\nhalves\thalf\nselves\tself\nthemselves\tthemselves\n"
        "ourselves\tourselves\nyourselves\tyourselves\npeople\tpeople\n"
        "movies\tmovie\ncookies\tcookie\nselfies\tselfie\nseries\tseries\n"
        "species\tspecies\nclothes\tclothes\nshoes\tshoe\nheroes\thero\n"
        "potatoes\tpotato\ntomatoes\ttomato\n"
        // irregular verbs
        "went\tgo\ngone\tgo\ngoes\tgo\ngoing\tgo\ndid\tdo\ndone\tdo\ndoes\tdo\n"
        "doing\tdo\nmade\tmake\ntook\ttake\ntaken\ttake\ngot\tget\ngotten\tget\n"
        "came\tcome\nsaw\tsee\nseen\tsee\nsaid\tsay\ntold\ttell\nthought\tthink\n"
        "bought\tbuy\nbrought\tbring\nfelt\tfeel\nfound\tfind\ngave\tgive\n"
        "given\tgive\nknew\tknow\nknown\tknow\nlost\tlose\nmet\tmeet\npaid\tpay\n"
        "ran\trun\nsat\tsit\nslept\tsleep\nspoke\tspeak\nstood\tstand\n"
        "swam\tswim\nwore\twear\nwon\twin\nwrote\twrite\nate\teat\nbroke\tbreak\n"
        "chose\tchoose\ndrank\tdrink\ndrove\tdrive\nfell\tfall\nflew\tfly\n"
        "forgot\tforget\nheard\thear\nheld\thold\nkept\tkeep\nsang\tsing\n"
        "sold\tsell\nsent\tsend\nspent\tspend\nwoke\twake\nthrew\tthrow\n"
        "understood\tunderstand\nbegan\tbegin\nbegun\tbegin\nleft\tleft\n"
        "died\tdie\nused\tuse\ndying\tdie\nlying\tlie\ntying\ttie\n"
        // auxiliaries keep their surface form; the pipeline retains stop
        // words and their inflection carries tense the models may use
        "was\twas\nwere\twere\nbeen\tbeen\nbeing\tbeing\nhas\thas\nhad\thad\n"
        "have\thave\ndoes\tdo\n"
        // words the suffix rules would mangle
        "news\tnews\nalways\talways\nperhaps\tperhaps\nbesides\tbesides\n"
        "towards\ttowards\nsometimes\tsometimes\nnothing\tnothing\n"
        "something\tsomething\nanything\tanything\neverything\teverything\n"
        "morning\tmorning\nevening\tevening\nduring\tduring\ndarling\tdarling\n"
        "indeed\tindeed\nneed\tneed\nfeed\tfeed\nseed\tseed\nspeed\tspeed\n"
        "king\tking\nring\tring\nsong\tsong\namazing\tamaze\nawesome\tawesome\n"
        "its\tits\nhis\this\nhers\thers\nyours\tyours\nours\tours\n"
        "theirs\ttheirs\nwhose\twhose\nthese\tthese\nthose\tthose\n"
        "because\tbecause\nplease\tplease\notherwise\totherwise\n"
        "jeans\tjeans\nthanks\tthanks\nseems\tseem\naches\tache\n"
        "headaches\theadache\nbreed\tbreed\nchanged\tchange\n"
        "changing\tchange\nchanges\tchange\nexcited\texcite\n"
        "exciting\texcite\ninvited\tinvite\ninviting\tinvite\n";
  }

  std::unordered_map<std::string, std::string> exceptions_;
};

}  // namespace twsent
