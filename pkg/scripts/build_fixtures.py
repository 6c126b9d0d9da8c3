#!/usr/bin/env python3
"""Regenerate the bundled forum + marketplace API fixture store.

The store is checked in under tests/fixtures/forum_store; rerunning this
script reproduces it byte for byte.  Layout:

  forum.test          3 board pages -> 5 threads, 12 posts, 4 signature links
  shoppy.gg API       6 valid shops (paginated products), 5 missing handles

Hand-tallied expectations (frozen in the tests):
  username records 12 (8 distinct normalizable handles, 1 ungrammatical)
  signature records 4 (dealking, nightowl, gamekeys, streamzone)
  valid shops 6: dealking, comboking, nightowl, xdarkseller, gamekeys,
  streamzone; products per shop 6/7/5/5/6/7 -> 36 total
"""

import json
import shutil
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from shopminer.harvest.fetcher import FixtureStore  # noqa: E402

FORUM = "http://forum.test"
API = "https://shoppy.gg"
STORE = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "forum_store"

BOARDS = {
    f"{FORUM}/board/1": """<html><head><title>Marketplace</title></head><body>
<h1>Marketplace board 1</h1>
<ul>
 <li><a href="/thread/t1">WTS streaming premium accounts</a></li>
 <li><a href="/thread/t2">cheap lifetime upgrades inside</a>
 <li><a href="/board/2">next page</a></li>
 <li><a href="/board/3">last page</a></li>
 <li><a href="https://example.org/rules">forum rules</a></li>
</ul>
</body></html>""",
    f"{FORUM}/board/2": """<html><body>
<h1>Marketplace board 2</h1>
<ul>
 <li><a href="/thread/t3">fresh combolists daily</a></li>
 <li><a href="/thread/t4">metal keys and serials</a></li>
 <li><a href="/board/1">first page</a></li>
</ul>
</body></html>""",
    f"{FORUM}/board/3": """<html><body>
<h1>Marketplace board 3</h1>
<ul><li><a href="/thread/t5">configs and tools</a></li></ul>
</body></html>""",
}

# 12 posts across 5 threads; signature links in t1 (anchor, duplicated in the
# post body), t3 (plain text), t4 (bare /handle) and t5 (www + @).
THREADS = {
    f"{FORUM}/thread/t1": """<html><body>
<div class="post">
 <span class="username">DealKing</span>
 <div class="content">Premium accounts in stock, also at <a href="https://shoppy.gg/@DealKing">my store</a></div>
 <div class="signature">shop: <a href="https://shoppy.gg/@DealKing">shoppy.gg/@DealKing</a></div>
</div>
<div class="post">
 <span class="username">alice_99</span>
 <div class="content">vouch, fast delivery</div>
</div>
<div class="post">
 <span class="username">comboKing</span>
 <div class="content">check my thread for lists
</div>
</body></html>""",
    f"{FORUM}/thread/t2": """<html><body>
<div class="post">
 <b class="username">DealKing</b>
 <div class="content">bump, new stock</div>
</div>
<div class="post">
 <span class="username">bob-shop</span>
 <div class="content">pm me <a href="https://www.youtube.com/watch?v=x">review video</a></div>
</div>
</body></html>""",
    f"{FORUM}/thread/t3": """<html><body>
<div class="post">
 <span class="username">NightOwl</span>
 <div class="content">daily drops</div>
 <div class="signature">visit shoppy.gg/@nightowl for configs and more</div>
</div>
<div class="post">
 <span class="username">alice_99</span>
 <div class="content">any vouches?</div>
</div>
<div class="post">
 <span class="username">xDarkSeller</span>
 <div class="content">selling hq stuff, dm</div>
</div>
</body></html>""",
    f"{FORUM}/thread/t4": """<html><body>
<div class="post">
 <span class="username">Mr Vendor</span>
 <div class="content">serials available</stray></div>
</div>
<div class="post">
 <span class="username">keymaster</span>
 <div class="content">oem keys</div>
 <div class="signature"><a href="https://shoppy.gg/gamekeys">my shop</a></div>
</div>
</body></html>""",
    f"{FORUM}/thread/t5": """<html><body>
<div class="post">
 <span class="username">proseller</span>
 <div class="content">tools and subs</div>
 <div class="signature"><a href="https://www.shoppy.gg/@StreamZone">StreamZone Shop</a></div>
</div>
<div class="post">
 <span class="username">NightOwl</span>
 <div class="content">restocked</div>
</div>
</body></html>""",
}

VALID_SHOPS = {
    "dealking": [
        {"title": "Netflix Premium Account UHD | Lifetime Warranty", "price_usd": 4.0,
         "category": "account", "metadata": {"stock": "12"}},
        {"title": "Spotify Family Owner Premium Upgrade", "price_usd": 3.5,
         "category": "account", "metadata": {}},
        {"title": "Hulu Premium Subscription 1 Month", "price_usd": 2.0,
         "category": "account", "metadata": {}},
        {"title": "NordVPN Premium VPN Account 2021", "price_usd": 5.0,
         "category": "account", "metadata": {}},
        {"title": "Disney Plus Premium Account + Warranty", "price_usd": 4.5,
         "category": "account", "metadata": {}},
        {"title": "Terms of Service. READ BEFORE BUYING", "price_usd": 750.0,
         "category": "service", "metadata": {}},
    ],
    "comboking": [
        {"title": "Combo List | 528M Yahoo.com", "price_usd": 400.0,
         "category": "file", "metadata": {}},
        {"title": "Combo List 376M Hotmail.com Private", "price_usd": 200.0,
         "category": "file", "metadata": {}},
        {"title": "1.1 Million USA Domain Valid Mail Access Combolist Private",
         "price_usd": 95.0, "category": "file", "metadata": {}},
        {"title": "Full DB dump | Fresh Database 24 Million records",
         "price_usd": 40.0, "category": "file", "metadata": {}},
        {"title": "151k USA Valid Mail Access Combolist HQ Private",
         "price_usd": 10.0, "category": "file", "metadata": {}},
        {"title": "naughtyamerica.com Mail Pass 114K Database", "price_usd": 0.0,
         "category": "file", "metadata": {}},
        {"title": "800k Gmail.com Domain Fresh Combolist Valid Hit",
         "price_usd": 20.0, "category": "file", "metadata": {}},
    ],
    "nightowl": [
        {"title": "OpenBullet Config | Full Capture Ultra Fast CPM", "price_usd": 15.0,
         "category": "service", "metadata": {}},
        {"title": "Spotify Config OpenBullet API Checker", "price_usd": 10.0,
         "category": "service", "metadata": {}},
        {"title": "Custom Config for OpenBullet Proxy Checker", "price_usd": 25.0,
         "category": "service", "metadata": {}},
        {"title": "PSN Captchaless API Config Full Capture CPM", "price_usd": 12.0,
         "category": "service", "metadata": {}},
        {"title": "Storm Config Ultra Fast CPM Proxy Capture", "price_usd": 8.0,
         "category": "service", "metadata": {}},
    ],
    "xdarkseller": [
        {"title": "Private Combo Database 12 Million Records Mail Access",
         "price_usd": 30.0, "category": "file", "metadata": {}},
        {"title": "Fresh USA Combolist Database Valid Hit Records",
         "price_usd": 18.0, "category": "file", "metadata": {}},
        {"title": "OpenBullet Config Pack Full Capture Checker", "price_usd": 22.0,
         "category": "service", "metadata": {}},
        {"title": "Fast CPM Proxy Config API Capture", "price_usd": 9.0,
         "category": "service", "metadata": {}},
        {"title": "Contact me on Telegram for Support", "price_usd": 550.0,
         "category": "service", "metadata": {}},
    ],
    "gamekeys": [
        {"title": "Windows 10 Pro License Key Digital Edition", "price_usd": 12.0,
         "category": "account", "metadata": {}},
        {"title": "Microsoft Office 2019 Pro Plus License Key", "price_usd": 18.0,
         "category": "account", "metadata": {}},
        {"title": "Steam Game Key Premium Edition Random", "price_usd": 3.0,
         "category": "account", "metadata": {}},
        {"title": "Borderlands Standard Edition Steam Game Key", "price_usd": 9.0,
         "category": "account", "metadata": {}},
        {"title": "Fortnite Account Random Skins Lifetime", "price_usd": 30.0,
         "category": "account", "metadata": {}},
        {"title": "Gaming Mouse Serial Number Logitech", "price_usd": 25.0,
         "category": "file", "metadata": {}},
    ],
    "streamzone": [
        {"title": "Spotify Premium Lifetime Subscription", "price_usd": 6.0,
         "category": "account", "metadata": {}},
        {"title": "Netflix UHD Premium Account Warranty", "price_usd": 5.5,
         "category": "account", "metadata": {}},
        {"title": "Hulu No Commercials Premium Plan Month", "price_usd": 3.0,
         "category": "account", "metadata": {}},
        {"title": "IPVanish VPN Premium Subscription", "price_usd": 4.0,
         "category": "account", "metadata": {}},
        {"title": "Disney Bundle Premium Plan", "price_usd": 5.0,
         "category": "account", "metadata": {}},
        # unknown category: the client must remap this to "account" with a warning
        {"title": "Steam Game Key Random Premium", "price_usd": 2.5,
         "category": "bundle", "metadata": {}},
        {"title": "Join our Discord Server | Support", "price_usd": 600.0,
         "category": "service", "metadata": {}},
    ],
}

INVALID_HANDLES = ["alice_99", "bob-shop", "keymaster", "proseller"]

PAGE_SIZE = 3  # comboking spans 3 product pages; everything else fits in one


def paginate(products, size):
    pages = [products[i : i + size] for i in range(0, len(products), size)]
    return pages + [[]]  # trailing empty page terminates pagination


def main():
    if STORE.exists():
        shutil.rmtree(STORE)
    store = FixtureStore(STORE)

    for url, body in {**BOARDS, **THREADS}.items():
        store.put(url, body.encode("utf-8"))

    for handle, products in VALID_SHOPS.items():
        store.put(
            f"{API}/api/v1/shops/{handle}",
            json.dumps({"handle": handle, "name": handle.title()}).encode("utf-8"),
        )
        pages = (
            paginate(products, PAGE_SIZE)
            if handle == "comboking"
            else [products, []]
        )
        for page_no, page in enumerate(pages, start=1):
            body = list(page)
            if handle == "nightowl" and page_no == 1:
                body.append({"title": None, "price_usd": 1.0, "category": "service"})
            store.put(
                f"{API}/api/v1/shops/{handle}/products?page={page_no}",
                json.dumps(body).encode("utf-8"),
            )

    for handle in INVALID_HANDLES:
        store.put(
            f"{API}/api/v1/shops/{handle}",
            json.dumps({"error": "not found"}).encode("utf-8"),
            status=404,
        )

    n_urls = len(json.loads((STORE / "index.json").read_text())["entries"])
    print(f"wrote {n_urls} fixture responses to {STORE}")


if __name__ == "__main__":
    main()
