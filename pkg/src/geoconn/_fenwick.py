"""Binary indexed tree over a fixed slot universe, with successor search.

Used as a dynamic ordered set of integer slots: `add`/`remove` toggle
membership, `next_at_or_after`/`prev_at_or_before` find neighbouring
occupied slots in O(log n).
"""


class FenwickSet:
    def __init__(self, n: int):
        self.n = n
        self.tree = [0] * (n + 1)
        self.member = [False] * n

    def _update(self, i: int, delta: int) -> None:
        i += 1
        while i <= self.n:
            self.tree[i] += delta
            i += i & (-i)

    def add(self, i: int) -> None:
        if self.member[i]:
            raise ValueError(f"slot {i} already occupied")
        self.member[i] = True
        self._update(i, 1)

    def remove(self, i: int) -> None:
        if not self.member[i]:
            raise ValueError(f"slot {i} not occupied")
        self.member[i] = False
        self._update(i, -1)

    def count_leq(self, i: int) -> int:
        # number of occupied slots with index <= i
        i += 1
        s = 0
        while i > 0:
            s += self.tree[i]
            i -= i & (-i)
        return s

    def _kth(self, k: int) -> int:
        # smallest index with count_leq(index) == k; k is 1-based
        pos = 0
        bit = 1
        while bit * 2 <= self.n:
            bit *= 2
        while bit > 0:
            nxt = pos + bit
            if nxt <= self.n and self.tree[nxt] < k:
                pos = nxt
                k -= self.tree[nxt]
            bit //= 2
        return pos  # 0-based slot

    def next_at_or_after(self, i: int) -> int | None:
        below = self.count_leq(i - 1) if i > 0 else 0
        total = self.count_leq(self.n - 1)
        if below >= total:
            return None
        return self._kth(below + 1)

    def prev_at_or_before(self, i: int) -> int | None:
        upto = self.count_leq(i)
        if upto == 0:
            return None
        return self._kth(upto)
