// SPDX-License-Identifier: Apache-2.0
#include "lexpand/normalize.hpp"

namespace lexpand::text {

const std::vector<std::string>& default_stopwords() {
  static const std::vector<std::string> words = {
      // English
      "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any",
      "are", "as", "at", "be", "because", "been", "before", "being", "below", "between",
      "both", "but", "by", "can", "could", "did", "do", "does", "doing", "down", "during",
      "each", "few", "for", "from", "further", "had", "has", "have", "having", "he", "her",
      "here", "hers", "herself", "him", "himself", "his", "how", "i", "if", "in", "into",
      "is", "it", "its", "itself", "just", "me", "more", "most", "my", "myself", "no", "nor",
      "not", "now", "of", "off", "on", "once", "only", "or", "other", "our", "ours",
      "ourselves", "out", "over", "own", "same", "she", "should", "so", "some", "such",
      "than", "that", "the", "their", "theirs", "them", "themselves", "then", "there",
      "these", "they", "this", "those", "through", "to", "too", "under", "until", "up",
      "very", "was", "we", "were", "what", "when", "where", "which", "while", "who", "whom",
      "why", "will", "with", "would", "you", "your", "yours", "yourself", "yourselves",
      // Arabic
      "في", "من", "إلى", "الى", "على", "عن", "مع", "هذا", "هذه", "ذلك", "تلك", "التي",
      "الذي", "الذين", "اللتي", "هو", "هي", "هم", "هن", "أنا", "نحن", "أنت", "أنتم",
      "كان", "كانت", "كانوا", "يكون", "تكون", "ليس", "ليست", "لم", "لن", "لا", "ما",
      "ماذا", "متى", "أين", "كيف", "لماذا", "هل", "قد", "لقد", "ثم", "أو", "أم", "و",
      "ف", "ب", "ل", "ك", "إن", "أن", "إذا", "اذا", "لكن", "بل", "حتى", "كل", "بعض",
      "غير", "بين", "عند", "عندما", "منذ", "خلال", "بعد", "قبل", "حيث", "أي", "أيضا",
      "ايضا", "كما", "فقط", "هناك", "هنا", "تم", "به", "بها", "له", "لها", "لهم", "فيه",
      "فيها", "منه", "منها", "عليه", "عليها", "إنه", "انه", "أنه", "إنها", "وهو", "وهي",
      "وفي", "ومن", "وقد", "ولا", "وما", "وكان", "يا", "ذات", "ضمن", "نحو", "لدى",
  };
  return words;
}

}  // namespace lexpand::text
