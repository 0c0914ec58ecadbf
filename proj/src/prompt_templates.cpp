// Copyright 2026 The GlossWeave Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "prompt_templates.hpp"

#include <string>
#include <vector>

namespace glossweave {

namespace templates {

const std::string_view kDgsExamplesHeader = "German text to German gloss examples:";

const std::string_view kDgsRulesWithExamples =
    "These examples demonstrate the transformation from natural German text into structured German gloss, "
    "specifically based on the benchmark for sign language translation in German weather forecasts.\n"
    "\n"
    "The output gloss should be optimized for sign language video translation by considering which words "
    "(e.g., nouns, adjectives, adverbs, numbers) are crucial in the context of weather forecasting.\n"
    "\n"
    "The gloss should:\n"
    "- Exclude function words like articles (\"der, die, das\") and auxiliary verbs unless necessary.\n"
    "- Preserve key content words such as weather conditions, time expressions, and geographic references.\n"
    "- Follow the typical structure of German sign language glosses for video.";

const std::string_view kDgsInferWithExamples =
    "Now, based on the examples provided above, please infer the most suitable German gloss sequence for the "
    "following German text:";

const std::string_view kDgsRulesZeroShot =
    "Your task is to generate German Sign Language gloss based on the given German text. Your gloss generation "
    "should align with the standard glossing conventions used in German Sign Language, particularly in the context "
    "of weather forecasting. The output gloss should be optimized for sign language video translation by "
    "considering which words (e.g., nouns, adjectives, adverbs, numbers) are crucial in the context of weather "
    "forecasting.\n"
    "\n"
    "The gloss should:\n"
    "- All numbers must be written in German words (e.g., \"eins\", \"zwei\", \"drei\").\n"
    "- Exclude function words like articles (\"der, die, das\") and auxiliary verbs unless necessary.\n"
    "- Preserve key content words such as weather conditions, time expressions, and geographic references.\n"
    "- Follow the typical structure of German sign language glosses for video.";

const std::string_view kDgsOutputSingle =
    "The output should follow the following format without any text formatting:\n"
    "Output: the generated gloss.";

const std::string_view kAslHeader =
    "Your task is to generate an American Sign Language (ASL) gloss based on the given English sentence.";

const std::string_view kAslRules =
    "Glossing Guidelines:\n"
    "Preserve key content words, such as nouns, adjectives, verbs, adverbs, and numbers, while omitting function "
    "words like articles (\"a, the\") and auxiliary verbs unless necessary.\n"
    "\n"
    "Convert numbers into fingerspelling-friendly formats (e.g., \"21\" should be \"TWO-ONE\").\n"
    "Spell out names and place names using ASL fingerspelling conventions, unless an established ASL sign exists.\n"
    "Use common ASL gloss abbreviations where applicable (e.g., \"IX\" for pronouns).";

const std::string_view kAslOutputHeader =
    "The output should be a single line containing the generated gloss without any additional text formatting:";

}  // namespace templates

// Redundant words removed when a gloss is too long for its video.
const std::vector<std::string>& remove_words() {
  static const std::vector<std::string> words = {
      "the",  "a",     "an",      "on",       "in",       "to",    "of",   "at",    "by",    "this",   "that",
      "and",  "but",   "or",      "so",       "because",  "for",   "with", "about", "as",    "if",     "then",
      "just", "like",  "very",    "really",   "actually", "alright", "well", "now", "there", "here",   "we",
      "you",  "my",    "your",    "our",      "us",       "it",    "its",  "they",  "them",  "their",  "is",
      "are",  "was",   "were",    "be",       "been",     "being", "do",   "does",  "did",   "done",   "can",
      "could", "will", "would",   "shall",    "should",   "might", "must", "let",   "make",  "get"};
  return words;
}

}  // namespace glossweave
