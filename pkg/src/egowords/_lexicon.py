"""Exception tables and base-form lexicon for the builtin lemmatizer.

Version builtin-1. The suffix rules in ``extraction`` consult these tables
first; entries win over rules. KNOWN_BASES backs candidate checks when
restoring a final "e" after stripping -ing/-ed (changed -> change), PRESERVE
blocks stripping on lexicalised forms the rules would mangle (morning).
"""

from __future__ import annotations

LEMMATIZER_VERSION = "builtin-1"

_IRREGULAR_VERBS = {
    # past / participle -> base
    "ate": "eat", "began": "begin", "begun": "begin", "bent": "bend",
    "bit": "bite", "bitten": "bite", "blew": "blow", "blown": "blow",
    "bought": "buy", "bred": "breed", "brought": "bring", "built": "build",
    "burnt": "burn", "came": "come", "caught": "catch", "chose": "choose",
    "chosen": "choose", "dealt": "deal", "did": "do", "done": "do",
    "drank": "drink", "drawn": "draw", "drew": "draw", "driven": "drive",
    "drove": "drive", "drunk": "drink", "fallen": "fall", "fed": "feed",
    "fell": "fall", "felt": "feel", "flew": "fly", "flown": "fly",
    "forgot": "forget", "forgotten": "forget", "fought": "fight",
    "found": "find", "gave": "give", "given": "give", "gone": "go",
    "got": "get", "gotten": "get", "grew": "grow", "grown": "grow",
    "heard": "hear", "held": "hold", "hid": "hide", "hidden": "hide",
    "kept": "keep", "knew": "know", "known": "know", "laid": "lay",
    "led": "lead", "left": "leave", "lent": "lend", "lost": "lose",
    "made": "make", "meant": "mean", "met": "meet", "paid": "pay",
    "ran": "run", "rang": "ring", "ridden": "ride", "risen": "rise",
    "rode": "ride", "rose": "rise", "said": "say", "sang": "sing",
    "sat": "sit", "saw": "see", "seen": "see", "sent": "send",
    "shaken": "shake", "shook": "shake", "shot": "shoot", "showed": "show",
    "shown": "show", "slept": "sleep", "sold": "sell", "sought": "seek",
    "spent": "spend", "spoke": "speak", "spoken": "speak", "stood": "stand",
    "struck": "strike", "sung": "sing", "swam": "swim", "swum": "swim",
    "taken": "take", "taught": "teach", "thought": "think", "threw": "throw",
    "thrown": "throw", "told": "tell", "took": "take", "tore": "tear",
    "torn": "tear", "understood": "understand", "went": "go", "woke": "wake",
    "woken": "wake", "won": "win", "wore": "wear", "worn": "wear",
    "wrote": "write", "written": "write",
    # be/have forms and negation-split auxiliaries
    "am": "be", "are": "be", "been": "be", "is": "be", "was": "be",
    "were": "be", "ca": "can", "sha": "shall", "wo": "will",
    # -ied forms too short for the suffix rule
    "died": "die", "lied": "lie", "tied": "tie",
    # -eed forms that do strip
    "agreed": "agree", "freed": "free", "guaranteed": "guarantee",
}

_IRREGULAR_NOUNS = {
    "calves": "calf", "children": "child", "feet": "foot", "geese": "goose",
    "halves": "half", "knives": "knife", "leaves": "leaf", "lives": "life",
    "loaves": "loaf", "men": "man", "mice": "mouse", "oxen": "ox",
    "scarves": "scarf", "selves": "self", "shelves": "shelf",
    "teeth": "tooth", "thieves": "thief", "wives": "wife", "wolves": "wolf",
    "women": "woman",
    # -ies plurals of -ie nouns (the ies->y rule would mangle these)
    "calories": "calorie", "cookies": "cookie", "movies": "movie",
    "species": "specie", "zombies": "zombie",
    # -oes plurals of -oe nouns
    "canoes": "canoe", "oboes": "oboe", "shoes": "shoe", "toes": "toe",
    # -ses where the generic -s strip misfires
    "bonuses": "bonus", "buses": "bus", "campuses": "campus",
    "gases": "gas", "statuses": "status", "viruses": "virus",
    # invariant forms
    "news": "news", "series": "series",
}

_IRREGULAR_ADJS = {
    # comparatives and superlatives; no generic -er/-est rule exists because
    # it destroys too many nouns (leader, water, forest, test).
    "best": "good", "better": "good", "worse": "bad", "worst": "bad",
    "bigger": "big", "biggest": "big", "brighter": "bright",
    "brightest": "bright", "cheaper": "cheap", "cheapest": "cheap",
    "cleaner": "clean", "cleanest": "clean", "closer": "close",
    "closest": "close", "colder": "cold", "coldest": "cold",
    "cooler": "cool", "coolest": "cool", "darker": "dark",
    "darkest": "dark", "deeper": "deep", "deepest": "deep",
    "earlier": "early", "earliest": "early", "easier": "easy",
    "easiest": "easy", "faster": "fast", "fastest": "fast",
    "funnier": "funny", "funniest": "funny", "greater": "great",
    "greatest": "great", "happier": "happy", "happiest": "happy",
    "harder": "hard", "hardest": "hard", "heavier": "heavy",
    "heaviest": "heavy", "higher": "high", "highest": "high",
    "hotter": "hot", "hottest": "hot", "larger": "large",
    "largest": "large", "later": "late", "latest": "late",
    "lighter": "light", "lightest": "light", "longer": "long",
    "longest": "long", "lower": "low", "lowest": "low",
    "newer": "new", "newest": "new", "nicer": "nice", "nicest": "nice",
    "older": "old", "oldest": "old", "poorer": "poor", "poorest": "poor",
    "quicker": "quick", "quickest": "quick", "richer": "rich",
    "richest": "rich", "safer": "safe", "safest": "safe",
    "shorter": "short", "shortest": "short", "simpler": "simple",
    "simplest": "simple", "slower": "slow", "slowest": "slow",
    "smaller": "small", "smallest": "small", "smarter": "smart",
    "smartest": "smart", "stronger": "strong", "strongest": "strong",
    "warmer": "warm", "warmest": "warm", "weaker": "weak",
    "weakest": "weak", "wider": "wide", "widest": "wide",
    "younger": "young", "youngest": "young",
}

LEMMA_EXCEPTIONS: dict[str, str] = {}
LEMMA_EXCEPTIONS.update(_IRREGULAR_VERBS)
LEMMA_EXCEPTIONS.update(_IRREGULAR_NOUNS)
LEMMA_EXCEPTIONS.update(_IRREGULAR_ADJS)

# Lexicalised forms the suffix rules must leave alone.
PRESERVE = frozenset({
    "anything", "athletics", "ceiling", "chaos", "darling", "duckling",
    "dumpling", "during", "economics", "evening", "everything", "gas",
    "genetics", "gosling", "hatred", "herring", "inkling", "kindred",
    "lens", "lightning", "mathematics", "maths", "morning", "naked",
    "nothing", "physics", "plus", "politics", "pudding", "sacred",
    "shilling", "sibling", "something", "viking", "wicked", "yes",
})

# Base forms used to validate e-restoration candidates after stripping
# -ing/-ed. Irregular-verb bases are included automatically below.
_E_FINAL_BASES = {
    "achieve", "acquire", "admire", "advance", "advise", "amaze", "amuse",
    "announce", "apologize", "appreciate", "argue", "arrive", "assure",
    "associate", "balance", "bake", "bathe", "believe", "bounce", "brake",
    "breathe", "capture", "care", "cause", "cease", "celebrate", "change",
    "chase", "circle", "close", "combine", "communicate", "compare",
    "compete", "complete", "concentrate", "conclude", "confuse", "continue",
    "create", "cycle", "dance", "date", "debate", "decide", "declare",
    "decline", "decrease", "define", "delete", "demonstrate", "describe",
    "deserve", "desire", "determine", "devote", "disable", "donate",
    "double", "educate", "emphasize", "enable", "encourage", "enhance",
    "ensure", "erase", "escape", "examine", "excite", "excuse", "exercise",
    "experience", "explore", "face", "fake", "feature", "figure", "file",
    "fire", "force", "freeze", "generate", "handle", "hate", "hire", "hope",
    "ignore", "imagine", "improve", "include", "increase", "indicate",
    "influence", "injure", "inspire", "insure", "introduce", "invite",
    "involve", "issue", "joke", "judge", "lease", "like", "live", "locate",
    "love", "manage", "measure", "move", "notice", "observe", "operate",
    "organize", "pause", "phrase", "picture", "place", "please", "praise",
    "prepare", "preserve", "produce", "promise", "promote", "pronounce",
    "provide", "purchase", "quote", "raise", "realize", "receive",
    "recognize", "recycle", "reduce", "refine", "refuse", "relate",
    "release", "require", "reserve", "resemble", "retire", "rotate",
    "save", "schedule", "score", "scrape", "secure", "separate", "serve",
    "settle", "shape", "share", "smile", "smoke", "sneeze", "snore",
    "squeeze", "stare", "state", "store", "struggle", "surprise", "tackle",
    "taste", "tease", "translate", "type", "unite", "update", "use",
    "value", "vote", "wave", "waste", "welcome", "whistle",
}

_PLAIN_BASES = {
    "call", "fill", "kill", "roll", "smell", "spell", "yell",
}

KNOWN_BASES = frozenset(
    _E_FINAL_BASES | _PLAIN_BASES | set(LEMMA_EXCEPTIONS.values())
)
