#!/usr/bin/env python3
"""Reference Porter stemmer used to freeze the test fixture.

Direct transcription of the author's canonical ANSI C implementation of the
1980 algorithm (including its documented refinements: bli->ble, logi->log,
words of length <= 2 untouched). Run:

    python3 tests/oracle/porter_reference.py tests/oracle/porter_vocabulary.txt \
        > tests/data/porter_fixture.tsv
"""
import sys


class Stemmer:
    def __init__(self, word):
        self.b = list(word)
        self.k = len(word) - 1
        self.j = 0

    def cons(self, i):
        ch = self.b[i]
        if ch in "aeiou":
            return False
        if ch == "y":
            return True if i == 0 else not self.cons(i - 1)
        return True

    def m(self):
        n = 0
        i = 0
        while True:
            if i > self.j:
                return n
            if not self.cons(i):
                break
            i += 1
        i += 1
        while True:
            while True:
                if i > self.j:
                    return n
                if self.cons(i):
                    break
                i += 1
            i += 1
            n += 1
            while True:
                if i > self.j:
                    return n
                if not self.cons(i):
                    break
                i += 1
            i += 1

    def vowelinstem(self):
        return any(not self.cons(i) for i in range(self.j + 1))

    def doublec(self, j):
        if j < 1:
            return False
        if self.b[j] != self.b[j - 1]:
            return False
        return self.cons(j)

    def cvc(self, i):
        if i < 2 or not self.cons(i) or self.cons(i - 1) or not self.cons(i - 2):
            return False
        return self.b[i] not in "wxy"

    def ends(self, s):
        length = len(s)
        if length > self.k + 1:
            return False
        if "".join(self.b[self.k - length + 1 : self.k + 1]) != s:
            return False
        self.j = self.k - length
        return True

    def setto(self, s):
        self.b[self.j + 1 : self.k + 1] = list(s)
        self.k = self.j + len(s)

    def r(self, s):
        if self.m() > 0:
            self.setto(s)

    def step1ab(self):
        if self.b[self.k] == "s":
            if self.ends("sses"):
                self.k -= 2
            elif self.ends("ies"):
                self.setto("i")
            elif self.b[self.k - 1] != "s":
                self.k -= 1
        if self.ends("eed"):
            if self.m() > 0:
                self.k -= 1
        elif (self.ends("ed") or self.ends("ing")) and self.vowelinstem():
            self.k = self.j
            if self.ends("at"):
                self.setto("ate")
            elif self.ends("bl"):
                self.setto("ble")
            elif self.ends("iz"):
                self.setto("ize")
            elif self.doublec(self.k):
                self.k -= 1
                if self.b[self.k] in "lsz":
                    self.k += 1
            elif self.m() == 1 and self.cvc(self.k):
                self.setto("e")

    def step1c(self):
        if self.ends("y") and self.vowelinstem():
            self.b[self.k] = "i"

    def step2(self):
        rules = [
            ("ational", "ate"), ("tional", "tion"), ("enci", "ence"),
            ("anci", "ance"), ("izer", "ize"), ("bli", "ble"),
            ("alli", "al"), ("entli", "ent"), ("eli", "e"),
            ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
            ("ator", "ate"), ("alism", "al"), ("iveness", "ive"),
            ("fulness", "ful"), ("ousness", "ous"), ("aliti", "al"),
            ("iviti", "ive"), ("biliti", "ble"), ("logi", "log"),
        ]
        for suffix, rep in rules:
            if self.ends(suffix):
                self.r(rep)
                return

    def step3(self):
        rules = [
            ("icate", "ic"), ("ative", ""), ("alize", "al"),
            ("iciti", "ic"), ("ical", "ic"), ("ful", ""), ("ness", ""),
        ]
        for suffix, rep in rules:
            if self.ends(suffix):
                self.r(rep)
                return

    def step4(self):
        suffixes = [
            "al", "ance", "ence", "er", "ic", "able", "ible", "ant",
            "ement", "ment", "ent", "ion", "ou", "ism", "ate", "iti",
            "ous", "ive", "ize",
        ]
        for suffix in suffixes:
            if not self.ends(suffix):
                continue
            if suffix == "ion" and not (
                self.j >= 0 and self.b[self.j] in "st"
            ):
                return
            if self.m() > 1:
                self.k = self.j
            return

    def step5(self):
        self.j = self.k
        if self.b[self.k] == "e":
            a = self.m()
            if a > 1 or (a == 1 and not self.cvc(self.k - 1)):
                self.k -= 1
        if self.b[self.k] == "l" and self.doublec(self.k) and self.m() > 1:
            self.k -= 1

    def result(self):
        if self.k <= 1:
            return "".join(self.b)
        self.step1ab()
        self.step1c()
        self.step2()
        self.step3()
        self.step4()
        self.step5()
        return "".join(self.b[: self.k + 1])


def stem(word):
    return Stemmer(word).result()


def main():
    if len(sys.argv) != 2:
        sys.exit("usage: porter_reference.py <vocabulary file>")
    with open(sys.argv[1]) as f:
        for line in f:
            word = line.strip()
            if not word or not word.isalpha() or not word.islower():
                continue
            print(f"{word}\t{stem(word)}")


if __name__ == "__main__":
    main()
