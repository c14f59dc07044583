#include "mosaiclink/wordlists.hpp"

#include <fstream>

#include "mosaiclink/errors.hpp"
#include "mosaiclink/username.hpp"

namespace mosaiclink {

const std::vector<std::string>& default_ui_words() {
    static const std::vector<std::string> words = {
        "help",    "view",         "meeting", "edit",   "participant", "speaker",
        "security", "screen",      "record",  "video",  "stop",        "share",
        "manage",  "view",         "exit",    "full",   "chat",        "end",
        "reactions", "recording",  "mute",    "zoom",   "participants", "from",
        "recording", "window",     "search",  "invite", "leave",       "unmute",
        "option",  "delete",       "raise",   "hand",   "new",         "type",
        "message", "here",
    };
    return words;
}

const std::set<std::string>& default_ui_word_set() {
    static const std::set<std::string> words(default_ui_words().begin(),
                                             default_ui_words().end());
    return words;
}

const std::set<std::string>& default_generic_names() {
    static const std::set<std::string> names = {
        "iphone", "ipad",    "android", "galaxy",  "pixel",  "samsung",
        "huawei", "macbook", "imac",    "windows", "laptop", "desktop",
        "tablet", "phone",   "user",    "guest",   "admin",  "unknown",
    };
    return names;
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

std::set<std::string> load_word_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open word list: " + path.string());
    }
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        const std::string word = trim(line);
        if (word.empty()) continue;
        words.insert(fold_case(word));
    }
    return words;
}

}  // namespace mosaiclink
