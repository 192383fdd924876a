class A {
  virtual void b();
  virtual void c() final;
};
class B final : public A {
  void b() override final;
};
