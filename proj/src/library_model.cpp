// Copyright 2026 The Retrofit Authors
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

#include "retrofit/semantics.hpp"

namespace retrofit {

namespace {

// Declarations only; bodies are never needed for typing.
constexpr std::string_view kLibrary = R"lib(
typedef unsigned long size_t;
typedef long ptrdiff_t;
int printf(const char* format, ...);
int puts(const char* s);
int putchar(int c);
size_t strlen(const char* s);
int strcmp(const char* a, const char* b);
int abs(int v);
double fabs(double v);
double sqrt(double v);
double pow(double b, double e);
double floor(double v);
double ceil(double v);
int rand();
int atoi(const char* s);
void* malloc(size_t n);
void free(void* p);
void exit(int code);

namespace std {
typedef unsigned long size_t;
typedef long ptrdiff_t;

template <class T1, class T2>
struct pair {
  typedef T1 first_type;
  typedef T2 second_type;
  T1 first;
  T2 second;
  pair();
  pair(const T1& a, const T2& b);
};
template <class T1, class T2> pair<T1, T2> make_pair(T1 a, T2 b);

class string {
 public:
  typedef unsigned long size_type;
  typedef char value_type;
  typedef char& reference;
  typedef const char& const_reference;
  typedef char* iterator;
  typedef const char* const_iterator;
  static const size_type npos = -1;
  string();
  string(const char* s);
  string(const string& s);
  string(size_type n, char c);
  iterator begin();
  const_iterator begin() const;
  iterator end();
  const_iterator end() const;
  size_type size() const;
  size_type length() const;
  bool empty() const;
  const char* c_str() const;
  const char* data() const;
  char& operator[](size_type i);
  const char& operator[](size_type i) const;
  char& at(size_type i);
  const char& at(size_type i) const;
  string substr(size_type pos, size_type n) const;
  size_type find(const string& s) const;
  size_type find(char c) const;
  string& append(const string& s);
  string& operator+=(const string& s);
  string& operator+=(char c);
  void push_back(char c);
  void clear();
  int compare(const string& s) const;
};
string operator+(const string& a, const string& b);
string operator+(const string& a, const char* b);
string operator+(const char* a, const string& b);
string operator+(const string& a, char b);
bool operator==(const string& a, const string& b);
bool operator!=(const string& a, const string& b);
bool operator<(const string& a, const string& b);
string to_string(int v);

template <class T>
class vector {
 public:
  typedef T value_type;
  typedef unsigned long size_type;
  typedef long difference_type;
  typedef T& reference;
  typedef const T& const_reference;
  typedef T* pointer;
  class iterator {
   public:
    T& operator*() const;
    T* operator->() const;
    iterator& operator++();
    iterator operator++(int);
    iterator& operator--();
    iterator operator--(int);
    iterator operator+(long n) const;
    iterator operator-(long n) const;
    long operator-(const iterator& o) const;
    T& operator[](long n) const;
    bool operator==(const iterator& o) const;
    bool operator!=(const iterator& o) const;
    bool operator<(const iterator& o) const;
  };
  class const_iterator {
   public:
    const_iterator(const iterator& it);
    const T& operator*() const;
    const T* operator->() const;
    const_iterator& operator++();
    const_iterator operator++(int);
    const_iterator& operator--();
    const_iterator operator+(long n) const;
    const_iterator operator-(long n) const;
    long operator-(const const_iterator& o) const;
    bool operator==(const const_iterator& o) const;
    bool operator!=(const const_iterator& o) const;
  };
  class reverse_iterator {
   public:
    T& operator*() const;
    T* operator->() const;
    reverse_iterator& operator++();
    reverse_iterator operator++(int);
    bool operator==(const reverse_iterator& o) const;
    bool operator!=(const reverse_iterator& o) const;
  };
  vector();
  vector(size_type n);
  vector(size_type n, const T& v);
  iterator begin();
  const_iterator begin() const;
  iterator end();
  const_iterator end() const;
  reverse_iterator rbegin();
  reverse_iterator rend();
  size_type size() const;
  bool empty() const;
  void reserve(size_type n);
  void resize(size_type n);
  T& operator[](size_type i);
  const T& operator[](size_type i) const;
  T& at(size_type i);
  const T& at(size_type i) const;
  T& front();
  const T& front() const;
  T& back();
  const T& back() const;
  T* data();
  void push_back(const T& v);
  void pop_back();
  void clear();
  iterator insert(iterator pos, const T& v);
  iterator erase(iterator pos);
};

template <class T>
class deque {
 public:
  typedef T value_type;
  typedef unsigned long size_type;
  typedef T& reference;
  typedef const T& const_reference;
  class iterator {
   public:
    T& operator*() const;
    T* operator->() const;
    iterator& operator++();
    iterator operator++(int);
    iterator& operator--();
    long operator-(const iterator& o) const;
    bool operator==(const iterator& o) const;
    bool operator!=(const iterator& o) const;
  };
  class const_iterator {
   public:
    const_iterator(const iterator& it);
    const T& operator*() const;
    const T* operator->() const;
    const_iterator& operator++();
    const_iterator operator++(int);
    bool operator==(const const_iterator& o) const;
    bool operator!=(const const_iterator& o) const;
  };
  deque();
  iterator begin();
  const_iterator begin() const;
  iterator end();
  const_iterator end() const;
  size_type size() const;
  bool empty() const;
  T& operator[](size_type i);
  const T& operator[](size_type i) const;
  T& front();
  T& back();
  void push_back(const T& v);
  void push_front(const T& v);
  void pop_back();
  void pop_front();
  void clear();
};

template <class T>
class list {
 public:
  typedef T value_type;
  typedef unsigned long size_type;
  typedef T& reference;
  typedef const T& const_reference;
  class iterator {
   public:
    T& operator*() const;
    T* operator->() const;
    iterator& operator++();
    iterator operator++(int);
    iterator& operator--();
    bool operator==(const iterator& o) const;
    bool operator!=(const iterator& o) const;
  };
  class const_iterator {
   public:
    const_iterator(const iterator& it);
    const T& operator*() const;
    const T* operator->() const;
    const_iterator& operator++();
    const_iterator operator++(int);
    bool operator==(const const_iterator& o) const;
    bool operator!=(const const_iterator& o) const;
  };
  list();
  iterator begin();
  const_iterator begin() const;
  iterator end();
  const_iterator end() const;
  size_type size() const;
  bool empty() const;
  T& front();
  T& back();
  void push_back(const T& v);
  void push_front(const T& v);
  void pop_back();
  void pop_front();
  void clear();
  void sort();
};

template <class T>
struct less {
  bool operator()(const T& a, const T& b) const;
};
template <class T>
struct greater {
  bool operator()(const T& a, const T& b) const;
};

template <class K>
class set {
 public:
  typedef K key_type;
  typedef K value_type;
  typedef unsigned long size_type;
  class iterator {
   public:
    const K& operator*() const;
    const K* operator->() const;
    iterator& operator++();
    iterator operator++(int);
    bool operator==(const iterator& o) const;
    bool operator!=(const iterator& o) const;
  };
  typedef iterator const_iterator;
  set();
  iterator begin() const;
  iterator end() const;
  size_type size() const;
  bool empty() const;
  pair<iterator, bool> insert(const K& k);
  iterator find(const K& k) const;
  size_type count(const K& k) const;
  size_type erase(const K& k);
  void clear();
};

template <class K, class V>
class map {
 public:
  typedef K key_type;
  typedef V mapped_type;
  typedef pair<const K, V> value_type;
  typedef unsigned long size_type;
  class iterator {
   public:
    pair<const K, V>& operator*() const;
    pair<const K, V>* operator->() const;
    iterator& operator++();
    iterator operator++(int);
    bool operator==(const iterator& o) const;
    bool operator!=(const iterator& o) const;
  };
  class const_iterator {
   public:
    const_iterator(const iterator& it);
    const pair<const K, V>& operator*() const;
    const pair<const K, V>* operator->() const;
    const_iterator& operator++();
    const_iterator operator++(int);
    bool operator==(const const_iterator& o) const;
    bool operator!=(const const_iterator& o) const;
  };
  map();
  iterator begin();
  const_iterator begin() const;
  iterator end();
  const_iterator end() const;
  size_type size() const;
  bool empty() const;
  V& operator[](const K& k);
  V& at(const K& k);
  iterator find(const K& k);
  const_iterator find(const K& k) const;
  size_type count(const K& k) const;
  pair<iterator, bool> insert(const pair<const K, V>& v);
  size_type erase(const K& k);
  void clear();
};

class ostream {
 public:
  ostream& flush();
};
class istream {
 public:
  bool good() const;
};
extern ostream cout;
extern ostream cerr;
extern istream cin;
ostream& endl(ostream& os);

template <class T> const T& max(const T& a, const T& b);
template <class T> const T& min(const T& a, const T& b);
template <class T> void swap(T& a, T& b);
template <class T> T abs(T v);
double sqrt(double v);
template <class I, class T> T accumulate(I first, I last, T init);
template <class I, class F> F for_each(I first, I last, F f);
template <class I> void sort(I first, I last);
template <class I, class C> void sort(I first, I last, C comp);
template <class I, class T> I find(I first, I last, const T& v);
template <class I, class P> I find_if(I first, I last, P pred);
template <class I, class T> long count(I first, I last, const T& v);
template <class I, class P> long count_if(I first, I last, P pred);
template <class I, class O, class F> O transform(I first, I last, O out, F f);
template <class I, class O> O copy(I first, I last, O out);
template <class I, class T> void fill(I first, I last, const T& v);
template <class I> void reverse(I first, I last);
template <class I> I max_element(I first, I last);
template <class I> I min_element(I first, I last);
template <class I> long distance(I first, I last);
}
)lib";

}  // namespace

std::string_view library_model_source() { return kLibrary; }

const SyntaxTree& library_model_tree() {
  static const SyntaxTree tree = parse_source(SourceText("<library>", std::string(kLibrary)));
  return tree;
}

}  // namespace retrofit
